use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hurwitz_core::braid_action::{act_sigma, act_word};
use hurwitz_core::catalog::{root_system, universal_matrix, CoxeterType};
use hurwitz_core::orbit_engine::{count_generating_orbits, matrix_orbit, CountMode};
use hurwitz_core::quasicoxeter::{charpoly, cox_fingerprint, cox_matrix};
use hurwitz_core::BraidWord;

fn braid_action(c: &mut Criterion) {
    let e8 = universal_matrix(CoxeterType::E8).unwrap();
    c.bench_function("act_sigma E8", |b| b.iter(|| act_sigma(black_box(&e8), 4, 1).unwrap()));
    let word: BraidWord = "s1 s2^-1 s3 s4 s5^-1 s6 s7 s1 s3^-1".parse().unwrap();
    c.bench_function("act_word E8 len 9", |b| b.iter(|| act_word(black_box(&e8), &word).unwrap()));
    c.bench_function("sign_canonical E8", |b| b.iter(|| black_box(&e8).sign_canonical()));
}

fn quasicoxeter(c: &mut Criterion) {
    let h4 = universal_matrix(CoxeterType::H4).unwrap();
    let e8 = universal_matrix(CoxeterType::E8).unwrap();
    c.bench_function("charpoly H4", |b| b.iter(|| charpoly(&cox_matrix(black_box(&h4))).unwrap()));
    c.bench_function("fingerprint E8", |b| b.iter(|| cox_fingerprint(black_box(&e8)).unwrap()));
}

fn orbits(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbits");
    group.sample_size(10);
    let h3 = root_system(CoxeterType::H3).unwrap();
    let b = h3.arrangement_matrix(h3.simple_reflections()).unwrap();
    group.bench_function("matrix_orbit H3", |bench| bench.iter(|| matrix_orbit(black_box(&b), 1_000_000).unwrap()));
    for kind in [CoxeterType::H3, CoxeterType::F4] {
        group.bench_function(format!("exhaustive count {kind}"), |bench| {
            bench.iter(|| count_generating_orbits(kind, kind.rank(), CountMode::Exhaustive { budget: 100_000_000 }).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, braid_action, quasicoxeter, orbits);
criterion_main!(benches);
