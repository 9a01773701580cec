use thiserror::Error;

/// Errors raised by the numerical and algebraic layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("window overflow: index {index} outside [-{radius}, {radius}]")]
    WindowOverflow { index: i64, radius: i64 },

    #[error("degenerate spectrum: eigenvalue gap {gap} below threshold")]
    DegenerateSpectrum { gap: String },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("complex zeros detected: {found} real zeros for degree {degree}")]
    ComplexZeros { found: usize, degree: usize },

    #[error("precision exhausted at {digits} digits (try --digits {recommended})")]
    PrecisionExhausted { digits: u32, recommended: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
