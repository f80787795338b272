use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} is undefined for argument {arg} (requires {requirement})")]
    Domain {
        name: &'static str,
        arg: f64,
        requirement: &'static str,
    },
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("state is not band-limited: tail amplitude ratio {ratio:.3e} exceeds {threshold:.1e}")]
    BandLimit { ratio: f64, threshold: f64 },
    #[error(
        "state has momentum support above {limit} mc (amplitude ratio {ratio:.3e}); the series current diverges there"
    )]
    SeriesSupport { limit: f64, ratio: f64 },
    #[error(
        "beta coefficient is degenerate: boosted pair velocity U'_12 = {0:.3e} (U_12 equals v)"
    )]
    DegenerateBeta(f64),
    #[error("expected {expected} plane-wave modes, found {found}")]
    ModeCount { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
