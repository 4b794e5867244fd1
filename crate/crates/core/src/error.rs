use thiserror::Error;

/// Errors raised anywhere in the model, simulator or scenario runner.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: |m({row},{col}) - conj(m({col},{row}))| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("positivity violated: minimum eigenvalue {min_eigenvalue:e}")]
    PositivityViolation { min_eigenvalue: f64 },

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("unsupported asymmetric coefficients: nu_u^2 = {nu_u2}, nu_d^2 = {nu_d2}")]
    UnsupportedAsymmetric { nu_u2: String, nu_d2: String },

    #[error("dimension {dim} too large for the dense superoperator (max {max})")]
    TooLarge { dim: usize, max: usize },

    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    #[error("health check failed at step {step}: {reason}")]
    HealthCheck { step: u64, reason: String },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("config: missing required key `{0}`")]
    MissingKey(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 1 for bad input, 2 for a health-check abort,
    /// 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. }
            | Error::MissingKey(_)
            | Error::Io(_)
            | Error::InvalidArgument(_)
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::TooLarge { .. }
            | Error::UnsupportedAsymmetric { .. } => 1,
            Error::HealthCheck { .. } => 2,
            _ => 3,
        }
    }
}
