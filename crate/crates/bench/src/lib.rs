//! Inputs shared by the criterion benchmarks in `benches/`.

use fermient_core::states::random_mixed_antisymmetric;
use fermient_core::{ComplexMatrix, DensityMatrix};

/// Seeded full-rank two-fermion states on `n` single-particle states.
pub fn mixed_states(n: usize, count: usize) -> Vec<DensityMatrix> {
    let rank = n * (n - 1) / 2;
    (0..count as u64)
        .map(|seed| random_mixed_antisymmetric(n, 2, rank, seed).expect("valid dimensions"))
        .collect()
}

/// Hermitian `dim x dim` test matrix with a spread spectrum.
pub fn hermitian(dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        let x = (i * dim + j) as f64;
        let y = (j * dim + i) as f64;
        num_complex::Complex64::new((x.sin() + y.sin()) / 2.0, (x.cos() - y.cos()) / 2.0)
    })
}
