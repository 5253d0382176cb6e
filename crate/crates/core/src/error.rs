use std::path::PathBuf;

use crate::propagation::PathLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{name} must be {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("invalid length {input:?}: {reason}")]
    Length { input: String, reason: &'static str },

    #[error("config: {0}")]
    Config(String),

    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),

    #[error("degenerate Gaussian: {0}")]
    Degenerate(&'static str),

    #[error("path {0} couples r and q when the slit widths differ; use the integrator")]
    CoupledPath(PathLabel),

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("correlation undefined: zero position variance")]
    UndefinedCorrelation,

    #[error(
        "no root of the phase constraint in [{lo:e}, {hi:e}] m \
         (phase difference spans {phi_min:.6} to {phi_max:.6} rad)"
    )]
    NoRoot {
        lo: f64,
        hi: f64,
        phi_min: f64,
        phi_max: f64,
    },

    #[error("root finder did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("arccos argument {0} lies outside [-1, 1]; the phase constraint is not met")]
    ConstraintViolated(f64),

    #[error("result set has no columns")]
    EmptyResult,

    #[error("columns have unequal lengths ({0} vs {1})")]
    RaggedColumns(usize, usize),

    #[error("malformed CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },

    #[error("scenario {scenario}: {source}")]
    Scenario {
        scenario: String,
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Numerical,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain { .. }
            | Error::Length { .. }
            | Error::Config(_)
            | Error::UnknownScenario(_)
            | Error::Csv { .. } => ErrorKind::Config,
            Error::Io { .. } => ErrorKind::Io,
            Error::Scenario { source, .. } => source.kind(),
            _ => ErrorKind::Numerical,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Config => 2,
            ErrorKind::Numerical => 3,
            ErrorKind::Io => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
