//! Criterion benchmarks for the dspg workspace live under `benches/`.
