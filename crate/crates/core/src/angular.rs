//! Clebsch–Gordan coefficients and the coupled two-particle basis.
//!
//! Quantum numbers are passed doubled (`two_j = 2j`) so half-integers stay exact.
//! A single-particle basis index `i` corresponds to `m = s - i`, i.e. index 0 is
//! the highest projection. Two-particle product states `|m1>⊗|m2>` sit at index
//! `i1 * n + i2`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Values with magnitude below this are snapped to exact zero.
const CG_SNAP: f64 = 1e-14;

/// Spin of a single particle, stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinLabel {
    two_s: u32,
}

impl SpinLabel {
    /// Spin compatible with a fermion space; `two_s` must be odd.
    pub fn new(two_s: u32) -> Result<Self> {
        if two_s.is_multiple_of(2) {
            return Err(Error::OddDimension(two_s as usize + 1));
        }
        Ok(Self { two_s })
    }

    /// Spin whose multiplet has `n` states (`n` even).
    pub fn from_dimension(n: usize) -> Result<Self> {
        if n < 2 || n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        Self::new(n as u32 - 1)
    }

    pub fn two_s(self) -> u32 {
        self.two_s
    }

    pub fn dimension(self) -> usize {
        self.two_s as usize + 1
    }

    /// Basis index of the single-particle state with projection `two_m / 2`.
    pub fn index_of(self, two_m: i32) -> Result<usize> {
        let two_s = self.two_s as i32;
        if two_m.abs() > two_s || (two_s - two_m) % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "2m = {two_m} is not a projection of 2s = {two_s}"
            )));
        }
        Ok(((two_s - two_m) / 2) as usize)
    }
}

fn ln_factorial(k: i32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![0.0; 512];
        for i in 1..t.len() {
            t[i] = t[i - 1] + (i as f64).ln();
        }
        t
    });
    table[k as usize]
}

fn check_pair(two_j: i32, two_m: i32) -> Result<()> {
    if two_j < 0 || two_m.abs() > two_j || (two_j + two_m) % 2 != 0 {
        return Err(Error::InvalidQuantumNumbers(format!("(2j, 2m) = ({two_j}, {two_m})")));
    }
    Ok(())
}

/// Condon–Shortley Clebsch–Gordan coefficient `<j1 m1; j2 m2 | j m>`, all
/// arguments doubled.
pub fn clebsch_gordan(two_j1: i32, two_m1: i32, two_j2: i32, two_m2: i32, two_j: i32, two_m: i32) -> Result<f64> {
    check_pair(two_j1, two_m1)?;
    check_pair(two_j2, two_m2)?;
    check_pair(two_j, two_m)?;
    if two_j1 + two_j2 + two_j >= 500 {
        return Err(Error::InvalidQuantumNumbers("angular momenta too large".into()));
    }
    if two_m1 + two_m2 != two_m
        || two_j > two_j1 + two_j2
        || two_j < (two_j1 - two_j2).abs()
        || (two_j1 + two_j2 + two_j) % 2 != 0
    {
        return Ok(0.0);
    }

    // Integer combinations entering the Racah sum.
    let a = (two_j1 + two_j2 - two_j) / 2;
    let b = (two_j1 - two_j2 + two_j) / 2;
    let c = (-two_j1 + two_j2 + two_j) / 2;
    let big = (two_j1 + two_j2 + two_j) / 2 + 1;
    let j1pm1 = (two_j1 + two_m1) / 2;
    let j1mm1 = (two_j1 - two_m1) / 2;
    let j2pm2 = (two_j2 + two_m2) / 2;
    let j2mm2 = (two_j2 - two_m2) / 2;
    let jpm = (two_j + two_m) / 2;
    let jmm = (two_j - two_m) / 2;

    let ln_prefactor = 0.5
        * (((two_j + 1) as f64).ln() + ln_factorial(a) + ln_factorial(b) + ln_factorial(c) - ln_factorial(big)
            + ln_factorial(j1pm1)
            + ln_factorial(j1mm1)
            + ln_factorial(j2pm2)
            + ln_factorial(j2mm2)
            + ln_factorial(jpm)
            + ln_factorial(jmm));

    // k ranges over values keeping every factorial argument non-negative.
    let d4 = (two_j - two_j2 + two_m1) / 2;
    let d5 = (two_j - two_j1 - two_m2) / 2;
    let k_min = 0.max(-d4).max(-d5);
    let k_max = a.min(j1mm1).min(j2pm2);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den = ln_factorial(k)
            + ln_factorial(a - k)
            + ln_factorial(j1mm1 - k)
            + ln_factorial(j2pm2 - k)
            + ln_factorial(d4 + k)
            + ln_factorial(d5 + k);
        let term = (ln_prefactor - ln_den).exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    Ok(if sum.abs() < CG_SNAP { 0.0 } else { sum })
}

/// Coupled two-particle state `|j, m>` for two spin-`s` particles as a column
/// of length `n²` in the product basis. `j` and `m` are integers here.
pub fn coupled_state(s: SpinLabel, j: i32, m: i32) -> Result<ComplexMatrix> {
    let two_s = s.two_s as i32;
    if j < 0 || j > two_s || m.abs() > j {
        return Err(Error::InvalidQuantumNumbers(format!(
            "(j, m) = ({j}, {m}) for 2s = {two_s}"
        )));
    }
    let n = s.dimension();
    let mut v = ComplexMatrix::zeros(n * n, 1);
    for i1 in 0..n {
        let two_m1 = two_s - 2 * i1 as i32;
        let two_m2 = 2 * m - two_m1;
        if two_m2.abs() > two_s {
            continue;
        }
        let i2 = s.index_of(two_m2)?;
        let cg = clebsch_gordan(two_s, two_m1, two_s, two_m2, 2 * j, 2 * m)?;
        v[(i1 * n + i2, 0)] = Complex64::new(cg, 0.0);
    }
    Ok(v)
}

/// One member of a [`CoupledBasis`].
#[derive(Debug, Clone)]
pub struct CoupledState {
    pub j: i32,
    pub m: i32,
    pub vector: ComplexMatrix,
}

/// Even-`j` coupled states spanning the antisymmetric two-fermion sector,
/// ordered by descending `j`, then descending `m`.
#[derive(Debug, Clone)]
pub struct CoupledBasis {
    pub spin: SpinLabel,
    pub states: Vec<CoupledState>,
}

impl CoupledBasis {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, j: i32, m: i32) -> Option<&CoupledState> {
        self.states.iter().find(|st| st.j == j && st.m == m)
    }

    /// Basis vectors as the columns of an `n² x len` matrix.
    pub fn as_matrix(&self) -> ComplexMatrix {
        let dim = self.spin.dimension().pow(2);
        let mut b = ComplexMatrix::zeros(dim, self.len());
        for (k, st) in self.states.iter().enumerate() {
            b.set_column(k, &st.vector);
        }
        b
    }
}

pub fn antisymmetric_basis(s: SpinLabel) -> Result<CoupledBasis> {
    let two_s = s.two_s as i32;
    let mut states = Vec::new();
    let top = two_s - 1; // largest even j below 2s, since 2s is odd
    for j in (0..=top).rev().filter(|j| j % 2 == 0) {
        for m in (-j..=j).rev() {
            states.push(CoupledState {
                j,
                m,
                vector: coupled_state(s, j, m)?,
            });
        }
    }
    Ok(CoupledBasis { spin: s, states })
}

/// Particle-exchange operator on the `n²`-dimensional product space.
pub fn swap_operator(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n * n, n * n, |r, c| {
        let (a, b) = (c / n, c % n);
        if r == b * n + a {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
