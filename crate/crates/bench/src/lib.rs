//! Criterion benchmarks for the hot kernels live in `benches/`: steering vectors, problem
//! evaluation for both systems, and non-dominated sorting.
