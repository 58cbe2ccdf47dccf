use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to be
/// printed as-is by the CLI.
#[derive(Debug, Error)]
pub enum PlgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("antisymmetry violated: residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    Antisymmetry { residual: f64, tol: f64 },

    #[error("Jacobi identity violated: residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    Jacobi { residual: f64, tol: f64 },

    #[error("1-cocycle condition violated: residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    Cocycle { residual: f64, tol: f64 },

    #[error("multivector degree {degree} out of range: {reason}")]
    Degree { degree: usize, reason: String },

    #[error("point {point:?} lies outside the chart domain of `{chart}`")]
    OutsideDomain { chart: String, point: Vec<f64> },

    #[error("trajectory left the chart domain at step {step}")]
    DomainExit { step: usize },

    #[error("singular translation Jacobian at {point:?} (det = {det:.3e})")]
    SingularJacobian { point: Vec<f64>, det: f64 },

    #[error("f0 = det(Ad_g) = {value:.3e} is not positive at {point:?}")]
    NonPositiveF0 { point: Vec<f64>, value: f64 },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("{context}: line {line}, column {column}: {message}")]
    Parse {
        context: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("model validation failed: {check} residual {residual:.3e} exceeds {tol:.1e}")]
    Validation {
        check: String,
        residual: f64,
        tol: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, PlgError>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(PlgError::DimensionMismatch { expected, got })
    }
}

impl PlgError {
    /// Process exit status used by the CLI: 3 when a trajectory leaves the
    /// chart, 1 for I/O, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PlgError::DomainExit { .. } => 3,
            PlgError::Io(_) | PlgError::Csv(_) => 1,
            _ => 2,
        }
    }
}
