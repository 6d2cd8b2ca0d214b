//! Criterion benchmarks for nileta; see `benches/`.
