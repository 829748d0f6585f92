//! Detection thresholds `p_min` over one-parameter state families, q-sweeps
//! of the Rényi threshold, and the N-fermion Werner threshold.
//!
//! A threshold is found by scanning a uniform grid on `[0, 1]`, picking the
//! last point where the indicator turns positive and bisecting that bracket.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concurrence::{concurrence_from_coupled, to_concurrence_basis};
use crate::criteria::SpectralPair;
use crate::entropy::EntropicOrder;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigvals, ComplexMatrix, Spectrum};
use crate::states::{
    dim6_state, general_werner, gisin_state, theta_state, werner_state, AntisymmetricSector, DensityMatrix, Dim6Family,
};

/// Default coarse grid step on `[0, 1]`.
pub const DEFAULT_GRID_STEP: f64 = 1e-3;
/// Bisection stops once the bracket is this narrow.
pub const BISECTION_WIDTH: f64 = 1e-12;
/// Largest `n` for which the closed-form factorials are evaluated exactly.
pub const MAX_EXACT_FACTORIAL: usize = 20;

/// A map `p ∈ [0, 1] -> DensityMatrix`.
pub trait StateFamily: Sync {
    fn id(&self) -> String;

    fn state(&self, p: f64) -> Result<DensityMatrix>;

    fn spectra(&self, p: f64) -> Result<SpectralPair> {
        SpectralPair::of(&self.state(p)?)
    }

    fn concurrence(&self, p: f64) -> Result<f64> {
        crate::concurrence::esbl_concurrence(&self.state(p)?)
    }
}

/// Named families of the form `p ρ₁ + (1 - p) ρ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    Werner,
    Gisin,
    Theta,
    Dim6(Dim6Family),
}

impl FamilyId {
    /// The five mixed families, in table order.
    pub const MIXED: [FamilyId; 5] = [
        FamilyId::Werner,
        FamilyId::Gisin,
        FamilyId::Dim6(Dim6Family::Phi1),
        FamilyId::Dim6(Dim6Family::Phi2),
        FamilyId::Dim6(Dim6Family::Phi3),
    ];

    /// Mixed family for this id. The θ family is pure and has no `p`.
    pub fn mixture(self) -> Result<MixtureFamily> {
        let (one, zero) = match self {
            FamilyId::Werner => (werner_state(1.0)?, werner_state(0.0)?),
            FamilyId::Gisin => (gisin_state(1.0)?, gisin_state(0.0)?),
            FamilyId::Dim6(which) => (dim6_state(which, 1.0)?, dim6_state(which, 0.0)?),
            FamilyId::Theta => {
                return Err(Error::UnknownFamily(
                    "theta is a pure-state family without a mixing parameter".into(),
                ))
            }
        };
        MixtureFamily::new(self.to_string(), one, zero)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::Werner => f.write_str("werner"),
            FamilyId::Gisin => f.write_str("gisin"),
            FamilyId::Theta => f.write_str("theta"),
            FamilyId::Dim6(which) => write!(f, "dim6-{}", which.index()),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "werner" => Ok(FamilyId::Werner),
            "gisin" => Ok(FamilyId::Gisin),
            "theta" => Ok(FamilyId::Theta),
            other => other
                .strip_prefix("dim6-")
                .and_then(|k| k.parse::<u32>().ok())
                .and_then(|k| Dim6Family::from_index(k).ok())
                .map(FamilyId::Dim6)
                .ok_or_else(|| Error::UnknownFamily(other.to_string())),
        }
    }
}

/// `p ρ₁ + (1 - p) ρ₀` with the sector, reduced and (for two fermions on
/// four states) coupled-basis matrices of both endpoints precomputed, so each
/// `p` costs one sector-sized and one single-particle eigensolve.
#[derive(Debug, Clone)]
pub struct MixtureFamily {
    id: String,
    one: DensityMatrix,
    zero: DensityMatrix,
    sector: [ComplexMatrix; 2],
    reduced: [ComplexMatrix; 2],
    coupled: Option<[ComplexMatrix; 2]>,
}

fn lerp(p: f64, one: &ComplexMatrix, zero: &ComplexMatrix) -> ComplexMatrix {
    &one.scale_real(p) + &zero.scale_real(1.0 - p)
}

impl MixtureFamily {
    pub fn new(id: impl Into<String>, one: DensityMatrix, zero: DensityMatrix) -> Result<Self> {
        if one.n() != zero.n() || one.particles() != zero.particles() {
            return Err(Error::DimensionMismatch {
                left: one.matrix().rows(),
                right: zero.matrix().rows(),
            });
        }
        let sector = AntisymmetricSector::new(one.n(), one.particles())?;
        let coupled = if one.n() == 4 && one.particles() == 2 {
            Some([to_concurrence_basis(&one)?, to_concurrence_basis(&zero)?])
        } else {
            None
        };
        Ok(Self {
            id: id.into(),
            sector: [sector.compress(one.matrix()), sector.compress(zero.matrix())],
            reduced: [one.reduce()?.matrix().clone(), zero.reduce()?.matrix().clone()],
            coupled,
            one,
            zero,
        })
    }

    pub fn particles(&self) -> usize {
        self.one.particles()
    }

    pub fn n(&self) -> usize {
        self.one.n()
    }

    fn check(p: f64) -> Result<()> {
        crate::error::check_unit_interval("p", p)
    }
}

impl StateFamily for MixtureFamily {
    fn id(&self) -> String {
        self.id.clone()
    }

    fn state(&self, p: f64) -> Result<DensityMatrix> {
        Self::check(p)?;
        DensityMatrix::new(
            self.n(),
            self.particles(),
            lerp(p, self.one.matrix(), self.zero.matrix()),
        )
    }

    fn spectra(&self, p: f64) -> Result<SpectralPair> {
        Self::check(p)?;
        let global = Spectrum::new(hermitian_eigvals(&lerp(p, &self.sector[0], &self.sector[1]))?)?;
        let reduced = Spectrum::new(hermitian_eigvals(&lerp(p, &self.reduced[0], &self.reduced[1]))?)?;
        Ok(SpectralPair {
            global,
            reduced,
            particles: self.particles(),
        })
    }

    fn concurrence(&self, p: f64) -> Result<f64> {
        Self::check(p)?;
        match &self.coupled {
            Some([one, zero]) => concurrence_from_coupled(&lerp(p, one, zero)),
            None => Err(Error::WrongDimension {
                expected: "n = 4, N = 2".into(),
                got: format!("n = {}, N = {}", self.n(), self.particles()),
            }),
        }
    }
}

/// Quantity whose strict positivity certifies entanglement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Indicator {
    DVonNeumann,
    DLinear,
    Renyi(EntropicOrder),
    RInfinity,
    Concurrence,
}

impl Indicator {
    /// Table indicators for a family of `particles` fermions on `n` states.
    pub fn table_set(n: usize, particles: usize) -> Vec<Indicator> {
        let mut set = vec![Indicator::DVonNeumann];
        if particles == 2 {
            set.push(Indicator::DLinear);
        }
        set.push(Indicator::RInfinity);
        set.push(Indicator::Renyi(EntropicOrder::TWO));
        if n == 4 && particles == 2 {
            set.push(Indicator::Concurrence);
        }
        set
    }

    pub fn key(&self) -> String {
        match self {
            Indicator::DVonNeumann => "d_vn".into(),
            Indicator::DLinear => "d_l".into(),
            Indicator::RInfinity => "r_inf".into(),
            Indicator::Renyi(q) => format!("r_{q}"),
            Indicator::Concurrence => "concurrence".into(),
        }
    }

    fn on_spectra(&self, pair: &SpectralPair) -> Result<f64> {
        match self {
            Indicator::DVonNeumann => Ok(pair.d_von_neumann()),
            Indicator::DLinear => pair.d_linear(),
            Indicator::Renyi(q) => Ok(pair.r_q(*q)),
            Indicator::RInfinity => Ok(pair.r_infinity()),
            Indicator::Concurrence => unreachable!("concurrence is not spectral"),
        }
    }

    pub fn evaluate(&self, family: &dyn StateFamily, p: f64) -> Result<f64> {
        match self {
            Indicator::Concurrence => family.concurrence(p),
            spectral => spectral.on_spectra(&family.spectra(p)?),
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub grid_step: f64,
    pub bisection_width: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            grid_step: DEFAULT_GRID_STEP,
            bisection_width: BISECTION_WIDTH,
        }
    }
}

impl ScanOptions {
    fn grid(&self) -> Result<Vec<f64>> {
        let step = self.grid_step;
        if !(step > 0.0 && step <= 0.5) {
            return Err(Error::ParameterOutOfRange {
                name: "grid_step",
                value: step,
                lo: 0.0,
                hi: 0.5,
            });
        }
        let count = (1.0 / step).round() as usize;
        Ok((0..=count).map(|i| i as f64 / count as f64).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub family: String,
    pub indicator: String,
    /// `None` when the indicator is positive at no grid point.
    pub p_min: Option<f64>,
    pub bracket_width: f64,
    /// A positive grid point is followed by a non-positive one.
    pub non_monotone: bool,
}

/// Last non-positive to positive transition on the grid, then bisection.
fn locate(
    grid: &[f64],
    values: &[f64],
    width: f64,
    eval: impl Fn(f64) -> Result<f64>,
) -> Result<(Option<f64>, f64, bool)> {
    let positive: Vec<bool> = values.iter().map(|&v| v > 0.0).collect();
    let non_monotone = positive.windows(2).any(|w| w[0] && !w[1]);
    let Some(last_pos) = positive.iter().rposition(|&b| b) else {
        return Ok((None, 0.0, non_monotone));
    };
    let start = positive[..last_pos].iter().rposition(|&b| !b);
    let Some(lo_idx) = start else {
        // Positive on the whole grid up to the detection region.
        return Ok((Some(grid[0]), 0.0, non_monotone));
    };
    let mut lo = grid[lo_idx];
    let mut hi = grid[lo_idx + 1];
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((Some(0.5 * (lo + hi)), hi - lo, non_monotone))
}

pub fn find_threshold(family: &dyn StateFamily, indicator: Indicator, opts: &ScanOptions) -> Result<ThresholdResult> {
    let grid = opts.grid()?;
    let values = grid
        .par_iter()
        .map(|&p| indicator.evaluate(family, p))
        .collect::<Result<Vec<f64>>>()?;
    let (p_min, bracket_width, non_monotone) =
        locate(&grid, &values, opts.bisection_width, |p| indicator.evaluate(family, p))?;
    Ok(ThresholdResult {
        family: family.id(),
        indicator: indicator.key(),
        p_min,
        bracket_width,
        non_monotone,
    })
}

/// Thresholds of the standard indicator set for one mixed family.
pub fn table(family: &MixtureFamily, opts: &ScanOptions) -> Result<Vec<ThresholdResult>> {
    Indicator::table_set(family.n(), family.particles())
        .into_iter()
        .map(|ind| find_threshold(family, ind, opts))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub q: EntropicOrder,
    pub p_min: Option<f64>,
}

/// `count` equally spaced orders on `[start, stop]`, optionally followed by `∞`.
pub fn q_grid(start: f64, stop: f64, count: usize, include_inf: bool) -> Result<Vec<EntropicOrder>> {
    if stop.is_nan() || start.is_nan() || stop < start {
        return Err(Error::InvalidOrder(stop));
    }
    let mut grid = match count {
        0 => Vec::new(),
        1 => vec![EntropicOrder::new(start)?],
        _ => (0..count)
            .map(|i| EntropicOrder::new(start + (stop - start) * i as f64 / (count - 1) as f64))
            .collect::<Result<Vec<_>>>()?,
    };
    if include_inf {
        grid.push(EntropicOrder::INFINITY);
    }
    Ok(grid)
}

/// `p_min` of `R_q` for every `q` in an ascending grid. Grid spectra are
/// computed once and shared by all orders.
pub fn q_sweep(family: &dyn StateFamily, q_grid: &[EntropicOrder], opts: &ScanOptions) -> Result<Vec<SweepPoint>> {
    if let Some(w) = q_grid.windows(2).find(|w| w[1] < w[0]) {
        return Err(Error::InvalidOrder(w[1].value()));
    }
    let grid = opts.grid()?;
    let spectra = grid
        .par_iter()
        .map(|&p| family.spectra(p))
        .collect::<Result<Vec<_>>>()?;
    q_grid
        .par_iter()
        .map(|&q| {
            let values: Vec<f64> = spectra.iter().map(|s| s.r_q(q)).collect();
            let (p_min, _, _) = locate(&grid, &values, opts.bisection_width, |p| Ok(family.spectra(p)?.r_q(q)))?;
            Ok(SweepPoint { q, p_min })
        })
        .collect()
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Closed-form `R_∞` threshold of the N-fermion Werner family on `n = kN`
/// states: `[N (n-1)! - (n-N)! N!] / [n! - (n-N)! N!]`, with exact integers.
pub fn nfermion_threshold_closed_form(particles: usize, n: usize) -> Result<f64> {
    if particles < 2 || n <= particles || !n.is_multiple_of(particles) {
        return Err(Error::InvalidDimensions(format!(
            "need N >= 2 and n = kN with k >= 2, got N = {particles}, n = {n}"
        )));
    }
    if n > MAX_EXACT_FACTORIAL {
        return Err(Error::DimensionTooLarge {
            dim: n,
            limit: MAX_EXACT_FACTORIAL,
        });
    }
    let shared = factorial(n - particles) * factorial(particles);
    let num = particles as u128 * factorial(n - 1) - shared;
    let den = factorial(n) - shared;
    Ok(num as f64 / den as f64)
}

/// Generalized Werner family as a [`MixtureFamily`].
pub fn general_werner_family(particles: usize, k: usize) -> Result<MixtureFamily> {
    MixtureFamily::new(
        format!("general-werner-{particles}-{k}"),
        general_werner(particles, k, 1.0)?,
        general_werner(particles, k, 0.0)?,
    )
}

/// Numeric `R_∞` threshold of the generalized Werner family.
pub fn nfermion_threshold_numeric(particles: usize, k: usize, opts: &ScanOptions) -> Result<ThresholdResult> {
    find_threshold(&general_werner_family(particles, k)?, Indicator::RInfinity, opts)
}

/// Indicators of the θ state at one angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaRow {
    pub theta: f64,
    pub d_vn: f64,
    pub d_l: f64,
    pub r_2: f64,
    pub r_inf: f64,
    pub concurrence: f64,
}

impl ThetaRow {
    pub fn entangled(&self) -> bool {
        self.concurrence > crate::criteria::VERDICT_TOL
    }

    pub fn detected(&self) -> bool {
        [self.d_vn, self.d_l, self.r_2, self.r_inf]
            .into_iter()
            .any(|v| crate::criteria::Verdict::of(v).detected())
    }
}

/// Indicators of the θ state on `points` equally spaced angles in `[0, π]`.
pub fn theta_scan(points: usize) -> Result<Vec<ThetaRow>> {
    let steps = points.max(2) - 1;
    (0..=steps)
        .into_par_iter()
        .map(|i| {
            let theta = std::f64::consts::PI * i as f64 / steps as f64;
            let rho = theta_state(theta.min(std::f64::consts::PI))?;
            let pair = SpectralPair::of(&rho)?;
            Ok(ThetaRow {
                theta,
                d_vn: pair.d_von_neumann(),
                d_l: pair.d_linear()?,
                r_2: pair.r_q(EntropicOrder::TWO),
                r_inf: pair.r_infinity(),
                concurrence: crate::concurrence::esbl_concurrence(&rho)?,
            })
        })
        .collect()
}

/// Nine significant digits, `.` as decimal separator, `inf` for infinity.
/// Magnitudes below 1e-4 use scientific notation.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let sci = format!("{x:.8e}");
    let exponent: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .expect("exponent in scientific format");
    if exponent < -4 {
        return sci;
    }
    let decimals = (8 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn format_p_min(p: Option<f64>) -> String {
    p.map_or_else(|| "none".to_string(), format_sig9)
}

fn format_order(q: EntropicOrder) -> String {
    format_sig9(q.value())
}

/// `family,indicator,p_min` rows.
pub fn table_csv(rows: &[ThresholdResult]) -> String {
    let mut out = String::from("family,indicator,p_min\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.family, r.indicator, format_p_min(r.p_min)));
    }
    out
}

/// `q,p_min` rows.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("q,p_min\n");
    for pt in points {
        out.push_str(&format!("{},{}\n", format_order(pt.q), format_p_min(pt.p_min)));
    }
    out
}

/// One `q` column followed by one `p_min` column per family. All sweeps must
/// share the same q grid.
pub fn wide_sweep_csv(names: &[String], sweeps: &[Vec<SweepPoint>]) -> Result<String> {
    let len = sweeps.first().map_or(0, Vec::len);
    if sweeps.len() != names.len() || sweeps.iter().any(|s| s.len() != len) {
        return Err(Error::DimensionMismatch {
            left: names.len(),
            right: sweeps.len(),
        });
    }
    let mut out = format!("q,{}\n", names.join(","));
    for i in 0..len {
        out.push_str(&format_order(sweeps[0][i].q));
        for s in sweeps {
            out.push(',');
            out.push_str(&format_p_min(s[i].p_min));
        }
        out.push('\n');
    }
    Ok(out)
}

/// `theta,d_vn,d_l,r_2,r_inf,concurrence` rows.
pub fn theta_csv(rows: &[ThetaRow]) -> String {
    let mut out = String::from("theta,d_vn,d_l,r_2,r_inf,concurrence\n");
    for r in rows {
        let cells = [r.theta, r.d_vn, r.d_l, r.r_2, r.r_inf, r.concurrence].map(format_sig9);
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
