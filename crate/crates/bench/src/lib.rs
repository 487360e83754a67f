//! Criterion benchmarks for condense-core; see `benches/`.
