use thiserror::Error;

/// Errors raised by the numerical layers of the lab.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("vector norm {norm:e} is too small to normalize")]
    ZeroVector { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    BadDimension { expected: String, found: String },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("state is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid apparatus model: {0}")]
    InvalidModel(String),

    #[error("measurement operators are incomplete (max deviation {deviation:e})")]
    IncompleteFamily { deviation: f64 },

    #[error("post-selected state is orthogonal to the pre-selected state (|overlap| = {overlap:e})")]
    OrthogonalPostselection { overlap: f64 },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("Poisson mean {0} is negative or not finite")]
    NegativeMean(f64),

    #[error("fit design is degenerate: {0}")]
    DegenerateDesign(String),

    #[error("fitted amplitude {amplitude:e} is zero, phase undefined")]
    AmplitudeZero { amplitude: f64 },

    #[error("uncertainty relation violated: lhs {lhs} < bound {bound}")]
    BoundViolated { lhs: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, LabError>;
