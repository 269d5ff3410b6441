//! Criterion benchmarks live in .
