//! Criterion benchmarks for `curvotex`; see `benches/`.
