//! Entanglement detection for systems of identical fermions.
//!
//! States live in the first-quantized product basis and are validated to be
//! supported on the antisymmetric sector. Entropic indicators compare the
//! single-particle reduced state with the global state; the exact concurrence
//! is available for two fermions on a four-dimensional single-particle space.

pub mod angular;
pub mod concurrence;
pub mod criteria;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod scanner;
pub mod states;

pub use concurrence::esbl_concurrence;
pub use criteria::{full_report, IndicatorReport, SpectralPair, Verdict};
pub use entropy::EntropicOrder;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Spectrum};
pub use scanner::{FamilyId, Indicator, MixtureFamily, ScanOptions, StateFamily, ThresholdResult};
pub use states::{DensityMatrix, Dim6Family, ReducedDensityMatrix};
