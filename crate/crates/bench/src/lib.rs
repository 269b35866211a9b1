//! Criterion benchmarks for `wigner-core`; see `benches/`.
