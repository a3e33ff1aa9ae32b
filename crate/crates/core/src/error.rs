use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QlcError {
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("evaluation on the singular line 1 + a1*x = 0 (x = {x})")]
    SingularLine { x: f64 },

    #[error("no oval at level h = {h}: {reason}")]
    NoOval { h: f64, reason: String },

    #[error("region mismatch: {0}")]
    RegionMismatch(String),

    #[error("logarithm argument out of domain: {0}")]
    LogDomain(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("degenerate parameter map: {0}")]
    DegenerateMap(String),

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("bracket lost: M({lo}) = {m_lo}, M({hi}) = {m_hi}")]
    LostBracket { lo: f64, hi: f64, m_lo: f64, m_hi: f64 },

    #[error("step size underflow at t = {t}")]
    StepFailure { t: f64 },

    #[error("trajectory left the period annulus: {0}")]
    EscapedAnnulus(String),

    #[error("trajectory hit the singular line at t = {t} (x = {x})")]
    SingularLineHit { t: f64, x: f64 },

    #[error("no displacement sign change over {} samples", profile.len())]
    NoSignChange { profile: Vec<(f64, f64)> },
}

impl QlcError {
    /// Stable variant name, used in machine-readable error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            QlcError::DegenerateParameters(_) => "DegenerateParameters",
            QlcError::SingularLine { .. } => "SingularLine",
            QlcError::NoOval { .. } => "NoOval",
            QlcError::RegionMismatch(_) => "RegionMismatch",
            QlcError::LogDomain(_) => "LogDomain",
            QlcError::DivisionByZero(_) => "DivisionByZero",
            QlcError::DegenerateMap(_) => "DegenerateMap",
            QlcError::QuadratureFailure(_) => "QuadratureFailure",
            QlcError::LostBracket { .. } => "LostBracket",
            QlcError::StepFailure { .. } => "StepFailure",
            QlcError::EscapedAnnulus(_) => "EscapedAnnulus",
            QlcError::SingularLineHit { .. } => "SingularLineHit",
            QlcError::NoSignChange { .. } => "NoSignChange",
        }
    }
}

pub type Result<T> = std::result::Result<T, QlcError>;
