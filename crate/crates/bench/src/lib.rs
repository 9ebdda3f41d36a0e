//! Benchmarks of the core kernels live in `benches/`.
