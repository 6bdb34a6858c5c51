use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use hurwitz_core::catalog::{representatives, root_system, universal_matrix, CoxeterType, ExtensionFamily, ReflectionId};
use hurwitz_core::orbit_engine::{
    classify_3x3, matrix_orbit, reflection_tuple_orbit, Classification, Verdict, DEFAULT_MATRIX_CAP, DEFAULT_TUPLE_CAP,
};
use hurwitz_core::quasicoxeter::cox_fingerprint;
use hurwitz_core::realization::{general_realization, minimal_realization};
use hurwitz_core::suites::{run_suite, SuiteOptions, SuiteReport, ALIASES, SUITES};
use hurwitz_core::{ArrangementMatrix, ExactNumber};

#[derive(Parser, Debug)]
#[command(name = "hurwitz", version, about = "Braid-group orbits of reflection arrangements")]
struct Cli {
    /// Worker threads for orbit searches; output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Upper bound on orbit states before giving up.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap: Option<u64>,
    /// Enables the long-running verification workloads.
    #[arg(long, global = true)]
    long: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Braid orbit of an arrangement matrix file ("-" reads stdin).
    Orbit {
        file: String,
        /// Representatives listed in the report.
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Hurwitz orbit of a reflection tuple {"group": "H3", "reflections": [...]}.
    Hurwitz {
        file: String,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Finite/infinite orbit verdict for a 3×3 matrix.
    Classify { file: String },
    /// Cyclotomic fingerprint of the quasicoxeter characteristic polynomial.
    Charpoly { file: String },
    /// A catalog matrix: a Coxeter type (A4, H4, I2(5)) or an extension family (B(A8,k=3)).
    Catalog {
        name: String,
        /// List the positive roots as well.
        #[arg(long)]
        roots: bool,
        /// Print the arrangement graph in DOT instead of a report.
        #[arg(long)]
        dot: bool,
    },
    /// Realization of a matrix file; minimal unless index sets are given.
    Realize {
        file: String,
        /// 1-based row set I″, comma separated.
        #[arg(long, value_delimiter = ',', requires = "cols")]
        rows: Vec<usize>,
        /// 1-based column set J″, comma separated.
        #[arg(long, value_delimiter = ',', requires = "rows")]
        cols: Vec<usize>,
        /// Free constants a′ then b′, comma separated expressions.
        #[arg(long, value_delimiter = ',')]
        constants: Vec<String>,
    },
    /// Run a verification suite by name, or "all".
    Verify {
        suite: String,
        /// Rank for dn-orbits.
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Successful output plus whether a verification failed.
struct Outcome {
    value: Value,
    text: Option<String>,
    failed: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, text: None, failed: false }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn read_matrix(path: &str) -> Result<ArrangementMatrix> {
    Ok(ArrangementMatrix::from_json_str(&read_input(path)?)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleFile {
    group: String,
    reflections: Vec<ReflectionId>,
}

fn cap_or(cli: &Cli, default: usize) -> usize {
    cli.cap.map(|c| usize::try_from(c).unwrap_or(usize::MAX)).unwrap_or(default)
}

fn verdict_json(v: Verdict) -> Value {
    match v {
        Verdict::Finite(k) => json!({"verdict": "Finite", "size": k}),
        Verdict::ExceededCap(k) => json!({"verdict": "ExceededCap", "size": k}),
    }
}

fn hurwitz_cmd(cli: &Cli, file: &str, limit: usize) -> Result<Value> {
    let input: TupleFile = serde_json::from_str(&read_input(file)?).context("tuple file")?;
    let kind: CoxeterType = input.group.parse()?;
    let rs = root_system(kind)?;
    rs.check_ids(&input.reflections)?;
    if input.reflections.is_empty() {
        bail!("tuple is empty");
    }
    let b = rs.arrangement_matrix(&input.reflections)?;
    let report = reflection_tuple_orbit(&rs, &input.reflections, cap_or(cli, DEFAULT_TUPLE_CAP))?;
    let fp = cox_fingerprint(&b)?;
    let mut out = verdict_json(report.verdict);
    let obj = out.as_object_mut().expect("object");
    obj.insert("group".into(), json!(kind.to_string()));
    obj.insert("reflections".into(), json!(input.reflections));
    obj.insert("generating".into(), json!(rs.is_generating(&input.reflections)));
    obj.insert("arrangement".into(), b.to_json());
    obj.insert("det".into(), json!(b.det().format_expr()?));
    obj.insert("charpoly".into(), fp.to_json());
    obj.insert("fingerprint".into(), json!(fp.label()));
    obj.insert("tuples".into(), json!(report.tuples.iter().take(limit).collect::<Vec<_>>()));
    Ok(out)
}

fn classify_cmd(cli: &Cli, file: &str) -> Result<Value> {
    let b = read_matrix(file)?;
    if b.n() != 3 {
        bail!("classify expects a 3×3 matrix, got {}×{}", b.n(), b.n());
    }
    let c = classify_3x3(&b, cap_or(cli, DEFAULT_MATRIX_CAP))?;
    let reason = match &c {
        Classification::Unknown(r) => Some(r.clone()),
        _ => None,
    };
    Ok(json!({"verdict": c.label(), "reason": reason}))
}

fn catalog_cmd(name: &str, roots: bool, dot: bool) -> Result<Outcome> {
    if let Ok(kind) = name.parse::<CoxeterType>() {
        let b = universal_matrix(kind)?;
        if dot {
            return Ok(Outcome { value: Value::Null, text: Some(b.to_dot()), failed: false });
        }
        let rs = root_system(kind)?;
        let reps: Vec<Value> = match kind {
            CoxeterType::E6 | CoxeterType::E7 | CoxeterType::E8 | CoxeterType::F4 | CoxeterType::H3 | CoxeterType::H4 => {
                representatives(kind)?
                    .into_iter()
                    .map(|r| json!({"fingerprint": r.fingerprint, "reflections": r.reflections, "matrix": r.matrix.to_json()}))
                    .collect()
            }
            _ => Vec::new(),
        };
        let mut out = json!({
            "group": kind.to_string(),
            "rank": kind.rank(),
            "roots": kind.root_count(),
            "reflections": rs.num_reflections(),
            "matrix": b.to_json(),
            "det": b.det().format_expr()?,
            "coxeter_fingerprint": cox_fingerprint(&b)?.label(),
            "representatives": reps,
        });
        if roots {
            let list: Vec<Vec<String>> = rs
                .positive_roots()
                .iter()
                .map(|&r| rs.roots()[r].iter().map(|x| x.to_string()).collect())
                .collect();
            out["positive_roots"] = json!(list);
        }
        return Ok(Outcome::ok(out));
    }
    let family: ExtensionFamily = name
        .parse()
        .map_err(|_| anyhow!("unknown catalog name {name:?}: expected a Coxeter type or an extension family"))?;
    let b = family.matrix()?;
    if dot {
        return Ok(Outcome { value: Value::Null, text: Some(b.to_dot()), failed: false });
    }
    Ok(Outcome::ok(json!({
        "family": family.to_string(),
        "matrix": b.to_json(),
        "det": b.det().format_expr()?,
        "displayed_det": family.displayed_det(),
        "rank": b.rank(),
    })))
}

fn realize_cmd(file: &str, rows: &[usize], cols: &[usize], constants: &[String]) -> Result<Value> {
    let b = read_matrix(file)?;
    let zero_based = |v: &[usize]| -> Result<Vec<usize>> {
        v.iter().map(|&k| k.checked_sub(1).ok_or_else(|| anyhow!("indices are 1-based"))).collect()
    };
    let real = if rows.is_empty() {
        if !constants.is_empty() {
            bail!("--constants needs --rows and --cols");
        }
        minimal_realization(&b)?
    } else {
        let constants = constants.iter().map(|c| ExactNumber::parse(c)).collect::<hurwitz_core::Result<Vec<_>>>()?;
        general_realization(&b, &zero_based(rows)?, &zero_based(cols)?, &constants)?
    };
    let mut out = real.to_json();
    out["minimal"] = json!(real.is_minimal());
    out["rank"] = json!(b.rank());
    out["product"] = json!(real.product().to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
    Ok(out)
}

fn verify_cmd(cli: &Cli, suite: &str, n: Option<usize>) -> Result<Outcome> {
    let opts = SuiteOptions { long: cli.long, n };
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) || ALIASES.iter().any(|(a, _)| *a == suite) {
        vec![suite]
    } else {
        let known: Vec<&str> = SUITES.iter().copied().chain(ALIASES.iter().map(|(a, _)| *a)).collect();
        bail!("unknown suite {suite:?}; expected all, {}", known.join(", "));
    };
    let reports = names.into_iter().map(|name| run_suite(name, &opts)).collect::<hurwitz_core::Result<Vec<SuiteReport>>>()?;
    let failed = reports.iter().any(|r| !r.passed());
    let text: String = reports.iter().map(|r| r.render_text()).collect();
    let value = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        json!({"pass": !failed, "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>()})
    };
    Ok(Outcome { value, text: Some(text), failed })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Orbit { file, limit } => {
            let b = read_matrix(file)?;
            Ok(Outcome::ok(matrix_orbit(&b, cap_or(cli, DEFAULT_MATRIX_CAP))?.to_json(*limit)?))
        }
        Command::Hurwitz { file, limit } => Ok(Outcome::ok(hurwitz_cmd(cli, file, *limit)?)),
        Command::Classify { file } => Ok(Outcome::ok(classify_cmd(cli, file)?)),
        Command::Charpoly { file } => {
            let b = read_matrix(file)?;
            let fp = cox_fingerprint(&b)?;
            let mut v = fp.to_json();
            v["label"] = json!(fp.label());
            Ok(Outcome::ok(v))
        }
        Command::Catalog { name, roots, dot } => catalog_cmd(name, *roots, *dot),
        Command::Realize { file, rows, cols, constants } => Ok(Outcome::ok(realize_cmd(file, rows, cols, constants)?)),
        Command::Verify { suite, n } => verify_cmd(cli, suite, *n),
    }
}

/// Plain-text rendering of a JSON report, one `key: value` per line.
fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x))),
                }
            }
        }
        Value::Array(items) => {
            for (k, x) in items.iter().enumerate() {
                out.push_str(&format!("{pad}[{k}]\n"));
                render_text(x, indent + 1, out);
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", inline(v))),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    if let Some(core) = e.downcast_ref::<hurwitz_core::Error>() {
        return match core {
            hurwitz_core::Error::Syntax { .. } | hurwitz_core::Error::InvalidLabel(_) => "parse",
            hurwitz_core::Error::NotSymmetric(..) | hurwitz_core::Error::BadDiagonal(_) => "matrix",
            hurwitz_core::Error::InvalidCap(_) | hurwitz_core::Error::BudgetExceeded(_) => "budget",
            hurwitz_core::Error::Singular => "singular",
            _ => "input",
        };
    }
    if e.downcast_ref::<serde_json::Error>().is_some() {
        return "parse";
    }
    if e.downcast_ref::<io::Error>().is_some() {
        return "io";
    }
    "input"
}

fn input_error(kind: &str, message: String) -> ExitCode {
    let err = json!({"error": {"kind": kind, "message": message}});
    eprintln!("{err}");
    ExitCode::from(2)
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    let body = match (cli.format, &outcome.text) {
        (Format::Text, Some(t)) => t.clone(),
        (_, Some(t)) if outcome.value.is_null() => t.clone(),
        (Format::Text, None) => {
            let mut s = String::new();
            render_text(&outcome.value, 0, &mut s);
            s
        }
        (Format::Json, _) => format!("{}\n", serde_json::to_string_pretty(&outcome.value)?),
    };
    match &cli.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return input_error("usage", e.to_string().trim().to_string());
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t as usize).build_global() {
            return input_error("usage", format!("thread pool: {e}"));
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => return input_error(error_kind(&e), format!("{e:#}")),
    };
    if let Err(e) = emit(&cli, &outcome) {
        return input_error(error_kind(&e), format!("{e:#}"));
    }
    if outcome.failed { ExitCode::from(1) } else { ExitCode::SUCCESS }
}
