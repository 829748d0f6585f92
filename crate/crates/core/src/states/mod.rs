//! Fermionic states in the first-quantized product basis.
//!
//! An N-fermion state on an `n`-dimensional single-particle space is a
//! `n^N x n^N` matrix supported on the antisymmetric sector. Spectra are taken
//! on the sector itself (see [`AntisymmetricSector`]).

mod json;
mod random;
mod sector;

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

pub use json::DensityMatrixJson;
pub use random::{
    random_antisymmetric_vector, random_mixed_antisymmetric, random_pure_antisymmetric, random_separable,
    random_unitary,
};
pub use sector::AntisymmetricSector;

use crate::angular::{coupled_state, SpinLabel};
use crate::error::{check_unit_interval, Error, Result};
use crate::linalg::{hermitian_eigvals, ComplexMatrix, Spectrum, HERMITIAN_TOL};

/// Trace and antisymmetric-support tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-9;
/// Largest product-space dimension for a single state vector.
pub const MAX_VECTOR_DIM: usize = 1_000_000;
/// Largest product-space dimension for a dense density matrix.
pub const MAX_MATRIX_DIM: usize = 4096;

fn checked_product_dim(n: usize, particles: usize, limit: usize) -> Result<usize> {
    let dim = (0..particles).try_fold(1usize, |acc, _| acc.checked_mul(n));
    match dim {
        Some(d) if d <= limit => Ok(d),
        Some(d) => Err(Error::DimensionTooLarge { dim: d, limit }),
        None => Err(Error::DimensionTooLarge { dim: usize::MAX, limit }),
    }
}

/// Validated N-fermion density matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    n: usize,
    particles: usize,
    matrix: ComplexMatrix,
    spectrum: Spectrum,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, antisymmetric support and positivity.
    pub fn new(n: usize, particles: usize, matrix: ComplexMatrix) -> Result<Self> {
        if particles < 2 || particles > n {
            return Err(Error::InvalidDimensions(format!(
                "need 2 <= N <= n, got N = {particles}, n = {n}"
            )));
        }
        let dim = checked_product_dim(n, particles, MAX_MATRIX_DIM)?;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::WrongDimension {
                expected: format!("{dim}x{dim}"),
                got: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        if matrix.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let sector = AntisymmetricSector::new(n, particles)?;
        let compressed = sector.compress(&matrix);
        let leak = sector.expand(&compressed).max_abs_diff(&matrix);
        if leak > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "support outside the antisymmetric sector (deviation {leak:e})"
            )));
        }
        let spectrum = Spectrum::new(hermitian_eigvals(&compressed)?)?;
        Ok(Self {
            n,
            particles,
            matrix,
            spectrum,
        })
    }

    /// Projector onto a normalized antisymmetric state vector.
    pub fn from_pure(n: usize, particles: usize, psi: &ComplexMatrix) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("state vector has norm {norm}")));
        }
        Self::new(n, particles, psi.outer())
    }

    /// `p |psi><psi| + (1 - p) P_anti / d`: a pure state diluted by the
    /// maximally mixed state of the antisymmetric sector.
    pub fn mixed_with_noise(n: usize, particles: usize, psi: &ComplexMatrix, p: f64) -> Result<Self> {
        check_unit_interval("p", p)?;
        checked_product_dim(n, particles, MAX_MATRIX_DIM)?;
        let sector = AntisymmetricSector::new(n, particles)?;
        let noise = sector.projector().scale_real((1.0 - p) / sector.dim() as f64);
        Self::new(n, particles, &psi.outer().scale_real(p) + &noise)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues of the state restricted to the antisymmetric sector.
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn purity(&self) -> f64 {
        self.spectrum.purity()
    }

    /// Conjugation by `U ⊗ … ⊗ U`.
    pub fn rotate_single_particle(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.n || u.cols() != self.n {
            return Err(Error::WrongDimension {
                expected: format!("{0}x{0}", self.n),
                got: format!("{}x{}", u.rows(), u.cols()),
            });
        }
        let mut w = u.clone();
        for _ in 1..self.particles {
            w = w.kron(u);
        }
        let rotated = &(&w * &self.matrix) * &w.adjoint();
        Self::new(self.n, self.particles, rotated)
    }

    /// Single-particle reduced state (trace over particles 2..N).
    pub fn reduce(&self) -> Result<ReducedDensityMatrix> {
        partial_trace_single(self)
    }
}

/// Single-particle reduced density matrix.
#[derive(Debug, Clone)]
pub struct ReducedDensityMatrix {
    n: usize,
    matrix: ComplexMatrix,
    spectrum: Spectrum,
}

impl ReducedDensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("reduced trace is {trace}")));
        }
        let spectrum = Spectrum::new(hermitian_eigvals(&matrix)?)?;
        Ok(Self {
            n: matrix.rows(),
            matrix,
            spectrum,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `Tr(ρ_r²)`.
    pub fn purity(&self) -> f64 {
        self.spectrum.purity()
    }
}

/// Raw partial trace over particles 2..N of a product-basis matrix.
pub(crate) fn trace_out_rest(m: &ComplexMatrix, n: usize, particles: usize) -> ComplexMatrix {
    let rest = n.pow(particles as u32 - 1);
    ComplexMatrix::from_fn(n, n, |a, b| (0..rest).map(|r| m[(a * rest + r, b * rest + r)]).sum())
}

pub fn partial_trace_single(rho: &DensityMatrix) -> Result<ReducedDensityMatrix> {
    ReducedDensityMatrix::new(trace_out_rest(&rho.matrix, rho.n, rho.particles))
}

/// `(|φ1>|φ2> - |φ2>|φ1>) / √2` for orthonormal single-particle states.
pub fn slater2(phi1: &ComplexMatrix, phi2: &ComplexMatrix) -> Result<ComplexMatrix> {
    if phi1.cols() != 1 || phi2.cols() != 1 || phi1.rows() != phi2.rows() {
        return Err(Error::WrongDimension {
            expected: "two column vectors of equal length".into(),
            got: format!("{}x{} and {}x{}", phi1.rows(), phi1.cols(), phi2.rows(), phi2.cols()),
        });
    }
    let deviation = (phi1.norm() - 1.0)
        .abs()
        .max((phi2.norm() - 1.0).abs())
        .max(phi1.inner(phi2).norm());
    if deviation > STATE_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok((&phi1.kron(phi2) - &phi2.kron(phi1)).scale_real(FRAC_1_SQRT_2))
}

/// Normalized Slater determinant over the basis states `indices` (one-based).
pub fn slater_n(n: usize, indices: &[usize]) -> Result<ComplexMatrix> {
    let particles = indices.len();
    if particles < 2 || particles > n {
        return Err(Error::InvalidDimensions(format!(
            "need 2 <= N <= n, got N = {particles}, n = {n}"
        )));
    }
    let dim = checked_product_dim(n, particles, MAX_VECTOR_DIM)?;
    let mut seen = vec![false; n];
    let mut zero_based = Vec::with_capacity(particles);
    for &i in indices {
        if i == 0 || i > n {
            return Err(Error::InvalidDimensions(format!("index {i} outside 1..={n}")));
        }
        if seen[i - 1] {
            return Err(Error::RepeatedIndex(i));
        }
        seen[i - 1] = true;
        zero_based.push(i - 1);
    }
    let mut v = ComplexMatrix::zeros(dim, 1);
    for (idx, amp) in sector::slater_components(n, &zero_based) {
        v[(idx, 0)] += Complex64::new(amp, 0.0);
    }
    Ok(v)
}

fn spin_three_halves() -> SpinLabel {
    SpinLabel::new(3).expect("2s = 3 is odd")
}

/// Singlet `|0,0>` diluted by the antisymmetric maximally mixed state (n = 4).
pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    let singlet = coupled_state(spin_three_halves(), 0, 0)?;
    DensityMatrix::mixed_with_noise(4, 2, &singlet, p)
}

/// Pure state `sinθ (|-3/2,3/2> - |3/2,-3/2>)/√2 + cosθ (|-1/2,1/2> - |1/2,-1/2>)/√2`
/// where the kets are product states.
pub fn theta_state_vector(theta: f64) -> Result<ComplexMatrix> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::ParameterOutOfRange {
            name: "theta",
            value: theta,
            lo: 0.0,
            hi: std::f64::consts::PI,
        });
    }
    let s = spin_three_halves();
    let n = 4;
    let ket = |two_m1: i32, two_m2: i32| -> Result<usize> { Ok(s.index_of(two_m1)? * n + s.index_of(two_m2)?) };
    let mut v = ComplexMatrix::zeros(n * n, 1);
    let a = theta.sin() * FRAC_1_SQRT_2;
    let b = theta.cos() * FRAC_1_SQRT_2;
    v[(ket(-3, 3)?, 0)] += Complex64::new(a, 0.0);
    v[(ket(3, -3)?, 0)] -= Complex64::new(a, 0.0);
    v[(ket(-1, 1)?, 0)] += Complex64::new(b, 0.0);
    v[(ket(1, -1)?, 0)] -= Complex64::new(b, 0.0);
    Ok(v)
}

pub fn theta_state(theta: f64) -> Result<DensityMatrix> {
    DensityMatrix::new(4, 2, theta_state_vector(theta)?.outer())
}

/// `p |0,0><0,0| + (1-p)/2 (|2,-2><2,-2| + |2,2><2,2|)` (n = 4).
pub fn gisin_state(p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    let s = spin_three_halves();
    let singlet = coupled_state(s, 0, 0)?.outer();
    let up = coupled_state(s, 2, 2)?.outer();
    let down = coupled_state(s, 2, -2)?.outer();
    let m = &singlet.scale_real(p) + &(&up + &down).scale_real((1.0 - p) / 2.0);
    DensityMatrix::new(4, 2, m)
}

/// The three pure states diluted in the six-dimensional examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim6Family {
    Phi1,
    Phi2,
    Phi3,
}

impl Dim6Family {
    pub const ALL: [Dim6Family; 3] = [Dim6Family::Phi1, Dim6Family::Phi2, Dim6Family::Phi3];

    pub fn from_index(which: u32) -> Result<Self> {
        match which {
            1 => Ok(Dim6Family::Phi1),
            2 => Ok(Dim6Family::Phi2),
            3 => Ok(Dim6Family::Phi3),
            other => Err(Error::UnknownFamily(format!("dim6-{other}"))),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Dim6Family::Phi1 => 1,
            Dim6Family::Phi2 => 2,
            Dim6Family::Phi3 => 3,
        }
    }

    /// Weights on `|5/2 3/2|`, `|1/2 -1/2|`, `|-3/2 -5/2|`.
    fn weights(self) -> [f64; 3] {
        let r3 = 1.0 / 3f64.sqrt();
        match self {
            Dim6Family::Phi1 => [r3, r3, -r3],
            Dim6Family::Phi2 => [-2.0 / 3.0, -2.0 / 3.0, 1.0 / 3.0],
            Dim6Family::Phi3 => [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0],
        }
    }

    pub fn vector(self) -> Result<ComplexMatrix> {
        let s = SpinLabel::new(5)?;
        let bar = |two_m1: i32, two_m2: i32| -> Result<ComplexMatrix> {
            let e1 = ComplexMatrix::basis_vector(6, s.index_of(two_m1)?);
            let e2 = ComplexMatrix::basis_vector(6, s.index_of(two_m2)?);
            slater2(&e1, &e2)
        };
        let dets = [bar(5, 3)?, bar(1, -1)?, bar(-3, -5)?];
        let mut v = ComplexMatrix::zeros(36, 1);
        for (det, w) in dets.iter().zip(self.weights()) {
            v = &v + &det.scale_real(w);
        }
        Ok(v)
    }
}

/// `p |φ_i><φ_i| + (1-p)/15 I_anti` (n = 6).
pub fn dim6_state(which: Dim6Family, p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    DensityMatrix::mixed_with_noise(6, 2, &which.vector()?, p)
}

/// `|Φ> = k^{-1/2} Σ_b |bN+1, …, bN+N|`, the sum of `k` disjoint Slater determinants.
pub fn general_werner_vector(particles: usize, k: usize) -> Result<ComplexMatrix> {
    if particles < 2 || k < 2 {
        return Err(Error::InvalidDimensions(format!(
            "need N >= 2 and k >= 2, got N = {particles}, k = {k}"
        )));
    }
    let n = particles * k;
    checked_product_dim(n, particles, MAX_MATRIX_DIM)?;
    let mut v = ComplexMatrix::zeros(n.pow(particles as u32), 1);
    for block in 0..k {
        let indices: Vec<usize> = (1..=particles).map(|i| block * particles + i).collect();
        v = &v + &slater_n(n, &indices)?;
    }
    Ok(v.scale_real(1.0 / (k as f64).sqrt()))
}

/// Generalized Werner family for `N` fermions on `n = kN` single-particle states.
pub fn general_werner(particles: usize, k: usize, p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    let phi = general_werner_vector(particles, k)?;
    DensityMatrix::mixed_with_noise(particles * k, particles, &phi, p)
}

/// `n! / ((n-N)! N!)`.
pub fn sector_dimension(n: usize, particles: usize) -> usize {
    (0..particles).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{antisymmetric_basis, swap_operator};
    use approx::assert_abs_diff_eq;

    fn diag_of(m: &ComplexMatrix) -> Vec<f64> {
        (0..m.rows()).map(|i| m[(i, i)].re).collect()
    }

    fn assert_close_slice(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert_abs_diff_eq!(x, y, epsilon = tol);
        }
    }

    #[test]
    fn slater2_matches_coupled_state() {
        let e1 = ComplexMatrix::basis_vector(4, 0);
        let e2 = ComplexMatrix::basis_vector(4, 1);
        let det = slater2(&e1, &e2).unwrap();
        let coupled = coupled_state(spin_three_halves(), 2, 2).unwrap();
        assert_abs_diff_eq!(det.inner(&coupled).norm(), 1.0, epsilon = 1e-12);
        let swapped = slater2(&e2, &e1).unwrap();
        assert!(swapped.max_abs_diff(&det.scale_real(-1.0)) < 1e-15);
        let rho = DensityMatrix::from_pure(4, 2, &det).unwrap();
        assert_abs_diff_eq!(rho.reduce().unwrap().purity(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn slater2_rejects_non_orthonormal() {
        let e1 = ComplexMatrix::basis_vector(4, 0);
        assert!(matches!(slater2(&e1, &e1), Err(Error::NotOrthonormal { .. })));
        let long = e1.scale_real(2.0);
        assert!(matches!(
            slater2(&long, &ComplexMatrix::basis_vector(4, 1)),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn slater_n_consistency_and_errors() {
        let two = slater_n(4, &[1, 2]).unwrap();
        let det = slater2(&ComplexMatrix::basis_vector(4, 0), &ComplexMatrix::basis_vector(4, 1)).unwrap();
        assert!(two.max_abs_diff(&det) < 1e-15);
        assert!(matches!(slater_n(4, &[1, 1]), Err(Error::RepeatedIndex(1))));
        assert!(matches!(
            slater_n(40, &[1, 2, 3, 4, 5]),
            Err(Error::DimensionTooLarge { .. })
        ));
        assert!(slater_n(4, &[0, 1]).is_err());
    }

    #[test]
    fn three_fermion_slater_reduction() {
        let v = slater_n(6, &[1, 2, 3]).unwrap();
        let rho = DensityMatrix::from_pure(6, 3, &v).unwrap();
        let red = rho.reduce().unwrap();
        let third = 1.0 / 3.0;
        assert_close_slice(&diag_of(red.matrix()), &[third, third, third, 0.0, 0.0, 0.0], 1e-12);
        assert_abs_diff_eq!(red.purity(), third, epsilon = 1e-12);
        assert!(
            red.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&diag_of(red.matrix())))
                < 1e-15
        );
    }

    #[test]
    fn partial_trace_examples() {
        let det = slater_n(4, &[1, 2]).unwrap();
        let red = DensityMatrix::from_pure(4, 2, &det).unwrap().reduce().unwrap();
        assert_close_slice(&diag_of(red.matrix()), &[0.5, 0.5, 0.0, 0.0], 1e-12);
        let quarter = ComplexMatrix::identity(4).scale_real(0.25);
        for p in [0.0, 0.3, 0.77, 1.0] {
            let red = werner_state(p).unwrap().reduce().unwrap();
            assert!(red.matrix().max_abs_diff(&quarter) < 1e-12);
        }
        for (particles, k) in [(2, 2), (2, 3), (3, 2)] {
            let n = particles * k;
            let phi = general_werner_vector(particles, k).unwrap();
            let red = DensityMatrix::from_pure(n, particles, &phi).unwrap().reduce().unwrap();
            let mixed = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
            assert!(red.matrix().max_abs_diff(&mixed) < 1e-12);
        }
    }

    #[test]
    fn werner_endpoints() {
        let pure = werner_state(1.0).unwrap();
        assert_abs_diff_eq!(pure.spectrum().max(), 1.0, epsilon = 1e-12);
        let mixed = werner_state(0.0).unwrap();
        assert_close_slice(mixed.spectrum().values(), &[1.0 / 6.0; 6], 1e-12);
        assert!(matches!(werner_state(1.5), Err(Error::ParameterOutOfRange { .. })));
    }

    #[test]
    fn theta_state_is_normalized_and_antisymmetric() {
        let swap = swap_operator(4);
        for i in 0..=10 {
            let theta = std::f64::consts::PI * i as f64 / 10.0;
            let v = theta_state_vector(theta).unwrap();
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
            assert!((&swap * &v).max_abs_diff(&v.scale_real(-1.0)) < 1e-15);
        }
        assert!(theta_state(4.0).is_err());
    }

    #[test]
    fn gisin_reduces_to_maximally_mixed() {
        let quarter = ComplexMatrix::identity(4).scale_real(0.25);
        for i in 0..=10 {
            let red = gisin_state(i as f64 / 10.0).unwrap().reduce().unwrap();
            assert!(red.matrix().max_abs_diff(&quarter) < 1e-12);
        }
    }

    #[test]
    fn dim6_family_indexing() {
        assert!(matches!(Dim6Family::from_index(4), Err(Error::UnknownFamily(_))));
        for f in Dim6Family::ALL {
            assert_eq!(Dim6Family::from_index(f.index()).unwrap(), f);
            assert_abs_diff_eq!(f.vector().unwrap().norm(), 1.0, epsilon = 1e-12);
            let rho = dim6_state(f, 0.4).unwrap();
            assert_eq!(rho.spectrum().len(), 15);
        }
    }

    #[test]
    fn general_werner_matches_werner_spectrum() {
        for p in [0.0, 0.25, 0.6, 1.0] {
            let a = general_werner(2, 2, p).unwrap();
            let b = werner_state(p).unwrap();
            assert_close_slice(a.spectrum().values(), b.spectrum().values(), 1e-12);
        }
        assert_eq!(sector_dimension(6, 2), 15);
        assert_eq!(sector_dimension(6, 3), 20);
        assert!(matches!(
            general_werner(4, 3, 0.5),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn antisymmetric_identity_equals_coupled_resolution() {
        let basis = antisymmetric_basis(spin_three_halves()).unwrap();
        let mut sum = ComplexMatrix::zeros(16, 16);
        for st in &basis.states {
            sum = &sum + &st.vector.outer();
        }
        let proj = AntisymmetricSector::new(4, 2).unwrap().projector();
        assert!(sum.max_abs_diff(&proj) < 1e-12);
    }

    #[test]
    fn validation_failures() {
        let det = slater_n(4, &[1, 2]).unwrap().outer();
        assert!(matches!(
            DensityMatrix::new(4, 2, det.scale_real(2.0)),
            Err(Error::InvalidState(_))
        ));
        // Symmetric product state: wrong sector.
        let sym = ComplexMatrix::basis_vector(16, 0).outer();
        assert!(matches!(DensityMatrix::new(4, 2, sym), Err(Error::InvalidState(_))));
        // Antisymmetric but not PSD.
        let a = slater_n(4, &[1, 2]).unwrap().outer().scale_real(1.5);
        let b = slater_n(4, &[3, 4]).unwrap().outer().scale_real(-0.5);
        assert!(matches!(
            DensityMatrix::new(4, 2, &a + &b),
            Err(Error::NegativeEigenvalue { .. })
        ));
        let mut skew = det.clone();
        skew[(1, 4)] += Complex64::new(0.0, 1e-3);
        assert!(matches!(
            DensityMatrix::new(4, 2, skew),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(4, 2, ComplexMatrix::identity(4)),
            Err(Error::WrongDimension { .. })
        ));
    }
}
