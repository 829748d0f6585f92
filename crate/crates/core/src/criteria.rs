//! Entropic entanglement indicators for N identical fermions.
//!
//! Each indicator compares an entropy of the single-particle reduced state with
//! the same entropy of the global state. Separable states (mixtures of Slater
//! determinants) never make one strictly positive:
//!
//! * `D_vN = S_vN(ρ_r) - S_vN(ρ) - ln N`
//! * `D_L  = S_L(ρ_r) - S_L(ρ) - 1/2` (two fermions only)
//! * `R_q  = S_q(ρ_r) - S_q(ρ) - ln N` for `q >= 1`; `R_∞` uses `-ln λ_max`.

use serde::{Deserialize, Serialize};

use crate::concurrence::esbl_concurrence;
use crate::entropy::{linear_entropy, renyi, von_neumann, EntropicOrder};
use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use crate::states::DensityMatrix;

/// Indicator values within this distance of zero are inconclusive.
pub const VERDICT_TOL: f64 = 1e-9;
/// Largest-eigenvalue threshold for treating a state as pure.
pub const PURITY_TOL: f64 = 1e-9;

/// Global and reduced spectra of one state; everything the entropic
/// indicators need.
#[derive(Debug, Clone)]
pub struct SpectralPair {
    pub global: Spectrum,
    pub reduced: Spectrum,
    pub particles: usize,
}

impl SpectralPair {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        Ok(Self {
            global: rho.spectrum().clone(),
            reduced: rho.reduce()?.spectrum().clone(),
            particles: rho.particles(),
        })
    }

    fn ln_particles(&self) -> f64 {
        (self.particles as f64).ln()
    }

    pub fn d_von_neumann(&self) -> f64 {
        von_neumann(&self.reduced) - von_neumann(&self.global) - self.ln_particles()
    }

    pub fn d_linear(&self) -> Result<f64> {
        if self.particles != 2 {
            return Err(Error::UnsupportedParticleCount(self.particles));
        }
        Ok(linear_entropy(&self.reduced) - linear_entropy(&self.global) - 0.5)
    }

    pub fn r_q(&self, q: EntropicOrder) -> f64 {
        renyi(&self.reduced, q) - renyi(&self.global, q) - self.ln_particles()
    }

    /// `ln λ_max(ρ) - ln λ_max(ρ_r) - ln N`.
    pub fn r_infinity(&self) -> f64 {
        self.global.max().ln() - self.reduced.max().ln() - self.ln_particles()
    }
}

pub fn d_von_neumann(rho: &DensityMatrix) -> Result<f64> {
    Ok(SpectralPair::of(rho)?.d_von_neumann())
}

pub fn d_linear(rho: &DensityMatrix) -> Result<f64> {
    if rho.particles() != 2 {
        return Err(Error::UnsupportedParticleCount(rho.particles()));
    }
    SpectralPair::of(rho)?.d_linear()
}

pub fn r_q(rho: &DensityMatrix, q: EntropicOrder) -> Result<f64> {
    Ok(SpectralPair::of(rho)?.r_q(q))
}

pub fn r_infinity(rho: &DensityMatrix) -> Result<f64> {
    Ok(SpectralPair::of(rho)?.r_infinity())
}

/// For a pure state: true iff `Tr(ρ_r²) = 1/N`, i.e. the state is a single
/// Slater determinant.
pub fn slater_rank_one_test(rho: &DensityMatrix) -> Result<bool> {
    let lambda_max = rho.spectrum().max();
    if lambda_max < 1.0 - PURITY_TOL {
        return Err(Error::NotPure { lambda_max });
    }
    let purity = rho.reduce()?.purity();
    Ok((purity - 1.0 / rho.particles() as f64).abs() <= PURITY_TOL)
}

/// Three-way reading of a signed indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Strictly positive beyond round-off: the state is entangled.
    Entangled,
    /// Within `VERDICT_TOL` of zero.
    Inconclusive,
    NotDetected,
}

impl Verdict {
    pub fn of(value: f64) -> Self {
        if value > VERDICT_TOL {
            Verdict::Entangled
        } else if value >= -VERDICT_TOL {
            Verdict::Inconclusive
        } else {
            Verdict::NotDetected
        }
    }

    pub fn detected(self) -> bool {
        self == Verdict::Entangled
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenyiValue {
    pub q: EntropicOrder,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub d_vn: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_l: Option<Verdict>,
    pub r_inf: Verdict,
    pub r_values: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<Verdict>,
}

/// Every indicator for one state. `d_l` is present only for two fermions and
/// `concurrence` only for two fermions on a four-dimensional space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorReport {
    pub n: usize,
    pub n_particles: usize,
    pub d_vn: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_l: Option<f64>,
    pub r_inf: f64,
    pub r_values: Vec<RenyiValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    pub verdicts: Verdicts,
}

impl IndicatorReport {
    /// True when any indicator certifies entanglement.
    pub fn any_detected(&self) -> bool {
        let v = &self.verdicts;
        v.d_vn.detected()
            || v.d_l.is_some_and(Verdict::detected)
            || v.r_inf.detected()
            || v.r_values.iter().any(|x| x.detected())
            || v.concurrence.is_some_and(Verdict::detected)
    }
}

pub fn full_report(rho: &DensityMatrix, q_grid: &[EntropicOrder]) -> Result<IndicatorReport> {
    let pair = SpectralPair::of(rho)?;
    let d_vn = pair.d_von_neumann();
    let d_l = (rho.particles() == 2).then(|| pair.d_linear()).transpose()?;
    let r_inf = pair.r_infinity();
    let r_values: Vec<RenyiValue> = q_grid.iter().map(|&q| RenyiValue { q, value: pair.r_q(q) }).collect();
    let concurrence = (rho.n() == 4 && rho.particles() == 2)
        .then(|| esbl_concurrence(rho))
        .transpose()?;
    let verdicts = Verdicts {
        d_vn: Verdict::of(d_vn),
        d_l: d_l.map(Verdict::of),
        r_inf: Verdict::of(r_inf),
        r_values: r_values.iter().map(|r| Verdict::of(r.value)).collect(),
        concurrence: concurrence.map(Verdict::of),
    };
    Ok(IndicatorReport {
        n: rho.n(),
        n_particles: rho.particles(),
        d_vn,
        d_l,
        r_inf,
        r_values,
        concurrence,
        verdicts,
    })
}
