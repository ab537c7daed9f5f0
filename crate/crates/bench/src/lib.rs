//! Criterion benchmarks of the pipeline stages live in `benches/`.
