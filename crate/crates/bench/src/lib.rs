//! Benchmarks for the kernel live in `benches/`.
