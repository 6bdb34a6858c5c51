//! Benchmarks for the orbit engine live in `benches/`.
