//! Acceptance harness: one PASS/FAIL line per criterion.
//!
//! Tolerance is exact equality everywhere (all arithmetic is in cyclotomic
//! fields). Each criterion also has a wall-clock budget; exceeding it fails
//! the line. Set HURWITZ_LONG=1 for the large E8 search.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hurwitz_core::suites::{run_suite, SuiteOptions, SUITES};

/// Wall-clock budget per criterion, in criterion order.
const BUDGETS: [Duration; 10] = [
    Duration::from_secs(10),
    Duration::from_secs(1),
    Duration::from_secs(600),
    Duration::from_secs(1800),
    Duration::from_secs(600),
    Duration::from_secs(5),
    Duration::from_secs(60),
    Duration::from_secs(60),
    Duration::from_secs(10),
    Duration::from_secs(1200),
];

fn main() -> ExitCode {
    let opts = SuiteOptions { long: std::env::var("HURWITZ_LONG").is_ok_and(|v| v == "1"), n: None };
    let mut failed = 0;
    for (k, name) in SUITES.iter().enumerate() {
        let start = Instant::now();
        let result = run_suite(name, &opts);
        let elapsed = start.elapsed();
        let within = elapsed <= BUDGETS[k];
        match result {
            Ok(report) => {
                let pass = report.passed() && within;
                let rows = report.rows.iter().filter(|r| r.pass).count();
                println!(
                    "{} criterion {:>2} {:<18} {}/{} rows exact, {:.2?} (budget {:?})",
                    if pass { "PASS" } else { "FAIL" },
                    k + 1,
                    name,
                    rows,
                    report.rows.len(),
                    elapsed,
                    BUDGETS[k]
                );
                for row in report.failures() {
                    println!("     - {}: {}", row.label, row.detail);
                }
                if !pass {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("FAIL criterion {:>2} {:<18} error: {e}", k + 1, name);
                failed += 1;
            }
        }
    }
    println!("{} of {} criteria passed", SUITES.len() - failed, SUITES.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
