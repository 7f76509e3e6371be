use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degree n = {n} exceeds m = {m}")]
    DegreeOrder { n: usize, m: usize },

    #[error("argument {0} lies on the branch cut")]
    BranchCut(Complex64),

    #[error("exact evaluation limited to n + m <= {limit}, got {got}")]
    ExactDegreeTooLarge { limit: usize, got: usize },

    #[error("time t = 0 is not admissible here")]
    ZeroTime,

    #[error("{method} did not converge: change {change:e} exceeds tolerance {tolerance:e}")]
    NotConverged {
        method: &'static str,
        change: f64,
        tolerance: f64,
    },

    #[error("truncation tail {tail:e} exceeds tolerance {tolerance:e} at working dimension {dim}")]
    TailTooLarge { tail: f64, tolerance: f64, dim: usize },

    #[error("sup norm {linf:e} exceeded blow-up cap {cap:e} at t = {time}")]
    BlowUp { linf: f64, cap: f64, time: f64 },
}
