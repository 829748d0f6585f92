use std::fs;
use std::path::Path;
use std::process::ExitCode;

use fermient_core::criteria::{full_report, SpectralPair};
use fermient_core::scanner::{
    format_sig9, nfermion_threshold_closed_form, nfermion_threshold_numeric, q_grid, q_sweep, sweep_csv,
    table as table_rows, table_csv, theta_csv, theta_scan, wide_sweep_csv, FamilyId, ScanOptions,
};
use fermient_core::states::random_separable;
use fermient_core::{DensityMatrix, Dim6Family, EntropicOrder, Error};

use crate::GridArgs;

/// Largest indicator value a separable state may show.
const SEPARABLE_TOL: f64 = 1e-9;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments: exit 1.
    Usage(String),
    /// Rejected input state: exit 2, JSON object on stdout.
    InvalidState(Error),
    /// Output could not be read or written: exit 1.
    Io(String),
    /// A property that must hold was violated: exit 3.
    Violation(String),
}

impl CliError {
    pub fn report(&self) -> ExitCode {
        match self {
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            CliError::Io(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            CliError::InvalidState(e) => {
                let obj = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
                println!("{obj}");
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
            CliError::Violation(msg) => {
                eprintln!("property violation: {msg}");
                ExitCode::from(3)
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Writes to `out` when given, stdout otherwise.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn scan_options(grid_step: f64) -> ScanOptions {
    ScanOptions {
        grid_step,
        ..ScanOptions::default()
    }
}

fn orders(grid: &GridArgs) -> Result<Vec<EntropicOrder>, CliError> {
    Ok(q_grid(grid.q_start, grid.q_stop, grid.q_count, grid.include_inf)?)
}

pub fn table(family: &str, grid_step: f64, theta_points: usize) -> Result<String, CliError> {
    let id: FamilyId = family.parse()?;
    if id == FamilyId::Theta {
        let rows = theta_scan(theta_points)?;
        let entangled = rows.iter().filter(|r| r.entangled()).count();
        let missed = rows.iter().filter(|r| r.entangled() && !r.detected()).count();
        if missed == 0 {
            eprintln!(
                "all entangled θ detected ({entangled} of {} angles entangled)",
                rows.len()
            );
        } else {
            eprintln!("{missed} of {entangled} entangled θ not detected");
        }
        return Ok(theta_csv(&rows));
    }
    let rows = table_rows(&id.mixture()?, &scan_options(grid_step))?;
    Ok(table_csv(&rows))
}

pub fn figure(which: u8, grid: &GridArgs) -> Result<String, CliError> {
    let ids: Vec<FamilyId> = match which {
        1 => vec![FamilyId::Werner, FamilyId::Gisin],
        2 => Dim6Family::ALL.into_iter().map(FamilyId::Dim6).collect(),
        other => return Err(CliError::Usage(format!("figure must be 1 or 2, got {other}"))),
    };
    let qs = orders(grid)?;
    let opts = scan_options(grid.grid_step);
    let names: Vec<String> = ids.iter().map(ToString::to_string).collect();
    let sweeps = ids
        .iter()
        .map(|id| q_sweep(&id.mixture()?, &qs, &opts))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(wide_sweep_csv(&names, &sweeps)?)
}

pub fn sweep(family: &str, grid: &GridArgs) -> Result<String, CliError> {
    let id: FamilyId = family.parse()?;
    let points = q_sweep(&id.mixture()?, &orders(grid)?, &scan_options(grid.grid_step))?;
    Ok(sweep_csv(&points))
}

pub fn analyze(input: &Path, grid: &GridArgs) -> Result<String, CliError> {
    let qs = orders(grid)?;
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::InvalidState(Error::Parse(format!("{}: {e}", input.display()))))?;
    let rho = DensityMatrix::from_json_str(&text).map_err(CliError::InvalidState)?;
    let report = full_report(&rho, &qs).map_err(CliError::InvalidState)?;
    let mut json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    json.push('\n');
    Ok(json)
}

pub fn nfermion(particles: usize, k: usize, grid_step: f64) -> Result<String, CliError> {
    let n = particles * k;
    let closed = nfermion_threshold_closed_form(particles, n)?;
    let mut out = format!(
        "N = {particles}, k = {k}, n = {n}\nclosed form: {}\n",
        format_sig9(closed)
    );
    match nfermion_threshold_numeric(particles, k, &scan_options(grid_step)) {
        Ok(r) => {
            let numeric = r
                .p_min
                .ok_or_else(|| CliError::Violation("no numeric threshold found".into()))?;
            out.push_str(&format!("numeric:     {}\n", format_sig9(numeric)));
            out.push_str(&format!("difference:  {:.3e}\n", (numeric - closed).abs()));
        }
        Err(Error::DimensionTooLarge { dim, limit }) => {
            out.push_str(&format!(
                "numeric:     skipped (product dimension {dim} exceeds the dense limit {limit})\n"
            ));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

pub fn selftest(seed: u64, count: usize, n: usize, grid: &GridArgs) -> Result<String, CliError> {
    let qs = orders(grid)?;
    if count == 0 {
        eprintln!("warning: count = 0, nothing sampled");
    }
    let mut max_r = f64::NEG_INFINITY;
    let mut max_d_l = f64::NEG_INFINITY;
    let mut worst = None;
    for i in 0..count {
        let sample_seed = seed.wrapping_add(i as u64);
        let terms = 1 + i % 8;
        let rho = random_separable(n, terms, sample_seed)?;
        let pair = SpectralPair::of(&rho)?;
        let r = qs.iter().map(|&q| pair.r_q(q)).fold(f64::NEG_INFINITY, f64::max);
        let d_l = pair.d_linear()?;
        if r.max(d_l) > max_r.max(max_d_l) {
            worst = Some(sample_seed);
        }
        max_r = max_r.max(r);
        max_d_l = max_d_l.max(d_l);
    }
    let mut out = format!(
        "selftest: n = {n}, seed = {seed}, samples = {count}, orders = {}\n",
        qs.len()
    );
    if count > 0 {
        out.push_str(&format!("max R_q = {max_r:.3e}\nmax D_L = {max_d_l:.3e}\n"));
    }
    if max_r > SEPARABLE_TOL || max_d_l > SEPARABLE_TOL {
        print!("{out}");
        return Err(CliError::Violation(format!(
            "separable sample {} exceeds {SEPARABLE_TOL:e}",
            worst.unwrap_or(seed)
        )));
    }
    out.push_str("ok\n");
    Ok(out)
}
