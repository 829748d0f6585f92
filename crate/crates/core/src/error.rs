use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("negative eigenvalue {value:e} below the clamp window")]
    NegativeEigenvalue { value: f64 },

    #[error("negative eigenvalue {value:e} of the product rho * rho_tilde")]
    NegativeProductEigenvalue { value: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("single-particle dimension {0} is odd; fermion spaces here have even dimension")]
    OddDimension(usize),

    #[error("single-particle states are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("repeated single-particle index {0}")]
    RepeatedIndex(usize),

    #[error("product-space dimension {dim} exceeds the limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("unknown state family `{0}`")]
    UnknownFamily(String),

    #[error("invalid entropic order {0}: orders must satisfy q >= 1")]
    InvalidOrder(f64),

    #[error("operation supports only N = 2 particles, got N = {0}")]
    UnsupportedParticleCount(usize),

    #[error("state is not pure (largest eigenvalue {lambda_max})")]
    NotPure { lambda_max: f64 },

    #[error("wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: String, got: String },

    #[error("state has weight {trace} in the antisymmetric sector; support leaks outside it")]
    SupportLeak { trace: f64 },

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name, used in machine-readable error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::NegativeEigenvalue { .. } => "NegativeEigenvalue",
            Error::NegativeProductEigenvalue { .. } => "NegativeProductEigenvalue",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonFinite => "NonFinite",
            Error::InvalidQuantumNumbers(_) => "InvalidQuantumNumbers",
            Error::OddDimension(_) => "OddDimension",
            Error::NotOrthonormal { .. } => "NotOrthonormal",
            Error::RepeatedIndex(_) => "RepeatedIndex",
            Error::DimensionTooLarge { .. } => "DimensionTooLarge",
            Error::ParameterOutOfRange { .. } => "ParameterOutOfRange",
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::UnsupportedParticleCount(_) => "UnsupportedParticleCount",
            Error::NotPure { .. } => "NotPure",
            Error::WrongDimension { .. } => "WrongDimension",
            Error::SupportLeak { .. } => "SupportLeak",
            Error::InvalidDimensions(_) => "InvalidDimensions",
            Error::InvalidState(_) => "InvalidState",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::ParameterOutOfRange {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}
