//! Exact concurrence of two fermions on a four-dimensional single-particle
//! space.
//!
//! The state is moved into the ordered coupled basis
//! `|2,2>, |2,1>, |2,0>, |2,-1>, |2,-2>, i|0,0>` (spin 3/2, Condon–Shortley
//! phases). There the antiunitary dual is `ρ̃ = M conj(ρ) Mᵀ` with the fixed
//! signed permutation [`DUAL_MATRIX`], and
//! `C = max(0, λ1 - λ2 - … - λ6)` over the square roots of the eigenvalues of
//! `ρ ρ̃`.

use num_complex::Complex64;

use crate::angular::{coupled_state, SpinLabel};
use crate::error::{Error, Result};
use crate::linalg::{product_sqrt_eigvals, ComplexMatrix};
use crate::states::DensityMatrix;

/// Weight of the state outside the antisymmetric sector that is tolerated.
const SUPPORT_TOL: f64 = 1e-9;

/// Real part of the dual operator in the ordered coupled basis.
#[rustfmt::skip]
pub const DUAL_MATRIX: [[f64; 6]; 6] = [
    [0.0,  0.0, 0.0,  0.0, 1.0, 0.0],
    [0.0,  0.0, 0.0, -1.0, 0.0, 0.0],
    [0.0,  0.0, 1.0,  0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0,  0.0, 0.0, 0.0],
    [1.0,  0.0, 0.0,  0.0, 0.0, 0.0],
    [0.0,  0.0, 0.0,  0.0, 0.0, 1.0],
];

fn dual_matrix() -> ComplexMatrix {
    ComplexMatrix::from_fn(6, 6, |i, j| Complex64::new(DUAL_MATRIX[i][j], 0.0))
}

/// Columns: `|2,2>, |2,1>, |2,0>, |2,-1>, |2,-2>, i|0,0>` in the 16-dim product basis.
pub fn concurrence_basis() -> ComplexMatrix {
    let s = SpinLabel::new(3).expect("2s = 3 is odd");
    let mut b = ComplexMatrix::zeros(16, 6);
    for (k, m) in (-2..=2).rev().enumerate() {
        b.set_column(k, &coupled_state(s, 2, m).expect("valid (j, m)"));
    }
    let singlet = coupled_state(s, 0, 0).expect("valid (j, m)");
    b.set_column(5, &singlet.scale(Complex64::new(0.0, 1.0)));
    b
}

/// `B† ρ B` in the ordered coupled basis.
pub fn to_concurrence_basis(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if rho.n() != 4 || rho.particles() != 2 {
        return Err(Error::WrongDimension {
            expected: "n = 4, N = 2".into(),
            got: format!("n = {}, N = {}", rho.n(), rho.particles()),
        });
    }
    let b = concurrence_basis();
    let rho6 = &(&b.adjoint() * rho.matrix()) * &b;
    let trace = rho6.trace().re;
    if trace < 1.0 - SUPPORT_TOL {
        return Err(Error::SupportLeak { trace });
    }
    Ok(rho6.hermitian_part())
}

/// `ρ̃ = M conj(ρ6) Mᵀ`.
pub fn d_conjugate(rho6: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho6.rows() != 6 || rho6.cols() != 6 {
        return Err(Error::WrongDimension {
            expected: "6x6".into(),
            got: format!("{}x{}", rho6.rows(), rho6.cols()),
        });
    }
    let m = dual_matrix();
    Ok(&(&m * &rho6.conj()) * &m.transpose())
}

/// Concurrence of a 6x6 state already expressed in the ordered coupled basis.
pub fn concurrence_from_coupled(rho6: &ComplexMatrix) -> Result<f64> {
    let tilde = d_conjugate(rho6)?;
    let lambdas = product_sqrt_eigvals(rho6, &tilde)?;
    let rest: f64 = lambdas[1..].iter().sum();
    Ok((lambdas[0] - rest).clamp(0.0, 1.0))
}

pub fn esbl_concurrence(rho: &DensityMatrix) -> Result<f64> {
    concurrence_from_coupled(&to_concurrence_basis(rho)?)
}
