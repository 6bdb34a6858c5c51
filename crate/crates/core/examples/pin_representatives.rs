//! Regenerates fixtures/representatives.json: one generating tuple per
//! quasicoxeter fingerprint bucket for the exceptional groups.

use hurwitz_core::catalog::{root_system, CoxeterType, ReflectionId};
use hurwitz_core::orbit_engine::{count_generating_orbits, fingerprint_search, CountMode};
use hurwitz_core::quasicoxeter::cox_fingerprint;
use serde_json::{json, Value};

const SEARCH_SEED: u64 = 1;
const SEARCH_SAMPLES: usize = 20_000;
const COUNT_SEED: u64 = 7;

fn bucket(label: String, reflections: Vec<ReflectionId>, extra: Value) -> Value {
    json!({ "fingerprint": label, "reflections": reflections, "found": extra })
}

/// Puts the bucket holding the simple reflections first.
fn coxeter_first(kind: CoxeterType, mut buckets: Vec<Value>) -> Vec<Value> {
    let rs = root_system(kind).unwrap();
    let b = rs.arrangement_matrix(rs.simple_reflections()).unwrap();
    let label = cox_fingerprint(&b).unwrap().label();
    buckets.sort_by_key(|v| v["fingerprint"].as_str() != Some(label.as_str()));
    buckets
}

fn main() {
    let mut groups = Vec::new();
    for (kind, mode, method) in [
        (CoxeterType::H3, CountMode::Exhaustive { budget: u64::MAX }, "exhaustive"),
        (CoxeterType::F4, CountMode::Exhaustive { budget: u64::MAX }, "exhaustive"),
        (CoxeterType::H4, CountMode::Exhaustive { budget: u64::MAX }, "exhaustive"),
        (CoxeterType::E6, CountMode::Seeded { budget: 10_000, seed: COUNT_SEED }, "seeded"),
    ] {
        let count = count_generating_orbits(kind, kind.rank(), mode).unwrap();
        let buckets = count
            .classes
            .into_iter()
            .map(|c| bucket(c.fingerprint.label(), c.representative, json!({ "orbit_size": c.size })))
            .collect();
        let seed = if method == "seeded" { COUNT_SEED } else { 0 };
        groups.push(json!({ "group": kind.to_string(), "method": method, "seed": seed, "buckets": coxeter_first(kind, buckets) }));
    }
    for kind in [CoxeterType::E7, CoxeterType::E8] {
        let search = fingerprint_search(kind, kind.rank(), SEARCH_SAMPLES, SEARCH_SEED).unwrap();
        let buckets = search
            .buckets
            .into_iter()
            .map(|(label, (hits, t, _))| bucket(label, t, json!({ "hits": hits, "samples": SEARCH_SAMPLES })))
            .collect();
        groups.push(json!({ "group": kind.to_string(), "method": "fingerprint_search", "seed": SEARCH_SEED, "buckets": coxeter_first(kind, buckets) }));
    }
    let out = json!({
        "about": "One generating reflection tuple per quasicoxeter characteristic-polynomial bucket. Reflection ids index the positive roots of catalog::root_system. Regenerate with `cargo run --release -p hurwitz-core --example pin_representatives`.",
        "groups": groups,
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
}
