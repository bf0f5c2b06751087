use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: expected {expected} samples, got {got}")]
    ShapeMismatch { expected: String, got: usize },

    #[error("vacuum: rho = {rho:e} in cell {cell} at t = {time}")]
    Vacuum { cell: usize, time: f64, rho: f64 },

    #[error("divergence: non-finite {field} at t = {time}")]
    Divergence { field: &'static str, time: f64 },

    #[error("zero pivot in tridiagonal solve at row {0}")]
    ZeroPivot(usize),

    #[error("degenerate time step {dt:e} at t = {time}")]
    DegenerateStep { dt: f64, time: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("run at nu = {nu:e} failed: {source}")]
    Ladder { nu: f64, source: Box<Error> },
}

impl Error {
    /// True for failures of the numerical integration itself (vacuum,
    /// blow-up, degenerate steps), as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Vacuum { .. }
            | Error::Divergence { .. }
            | Error::ZeroPivot(_)
            | Error::DegenerateStep { .. } => true,
            Error::Ladder { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
