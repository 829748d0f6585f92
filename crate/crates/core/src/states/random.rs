//! Seeded samplers for random fermionic states.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{slater2, AntisymmetricSector, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Gram–Schmidt on `k` Gaussian vectors of length `n`: the first `k` columns of
/// a Haar-random unitary.
fn orthonormal_columns(n: usize, k: usize, rng: &mut impl Rng) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(k);
    while out.len() < k {
        let mut v = ComplexMatrix::column((0..n).map(|_| gaussian(rng)).collect());
        for u in &out {
            let overlap = u.inner(&v);
            v = &v - &u.scale(overlap);
        }
        let norm = v.norm();
        if norm < 1e-8 {
            continue;
        }
        out.push(v.scale_real(1.0 / norm));
    }
    out
}

/// Haar-random `n x n` unitary.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let cols = orthonormal_columns(n, n, rng);
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        u.set_column(j, c);
    }
    u
}

/// Flat-Dirichlet weights.
fn dirichlet(k: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Random mixture of `terms` two-fermion Slater determinants built from
/// Haar-random orthonormal pairs. Deterministic in `seed`.
pub fn random_separable(n: usize, terms: usize, seed: u64) -> Result<DensityMatrix> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if terms == 0 {
        return Err(Error::InvalidDimensions("a mixture needs at least one term".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = dirichlet(terms, &mut rng);
    let mut rho = ComplexMatrix::zeros(n * n, n * n);
    for w in weights {
        let pair = orthonormal_columns(n, 2, &mut rng);
        let det = slater2(&pair[0], &pair[1])?;
        rho = &rho + &det.outer().scale_real(w);
    }
    DensityMatrix::new(n, 2, rho)
}

/// Random normalized vector in the antisymmetric sector (product basis).
pub fn random_antisymmetric_vector(n: usize, particles: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let sector = AntisymmetricSector::new(n, particles)?;
    let coeffs: Vec<Complex64> = (0..sector.dim()).map(|_| gaussian(rng)).collect();
    let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let coeffs: Vec<Complex64> = coeffs.into_iter().map(|c| c / norm).collect();
    Ok(sector.embed(&coeffs))
}

/// Random pure state of the antisymmetric sector, Gaussian in the Slater basis.
pub fn random_pure_antisymmetric(n: usize, particles: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi = random_antisymmetric_vector(n, particles, &mut rng)?;
    DensityMatrix::from_pure(n, particles, &psi)
}

/// Random mixture of `rank` random pure antisymmetric states.
pub fn random_mixed_antisymmetric(n: usize, particles: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank == 0 {
        return Err(Error::InvalidDimensions("rank must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = dirichlet(rank, &mut rng);
    let dim = n.pow(particles as u32);
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for w in weights {
        let psi = random_antisymmetric_vector(n, particles, &mut rng)?;
        rho = &rho + &psi.outer().scale_real(w);
    }
    DensityMatrix::new(n, particles, rho)
}
