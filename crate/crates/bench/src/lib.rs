//! Criterion benchmarks for ball builds, hyperbolicity estimates and quasiconvexity profiles; see `benches/`.
