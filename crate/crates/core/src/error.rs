use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("series requires sum k*psi(k) < inf: {0}")]
    Divergent(String),
    #[error("certified remainder not below relative tolerance {rel_tol:e} within {terms} terms")]
    SlowConvergence { terms: u64, rel_tol: f64 },
    #[error("psi is not strictly decreasing near t = {t}")]
    NonMonotone { t: f64 },
    #[error("division by a vanishing tail sum")]
    DivisionDomain,
    #[error("no ratio-monotonicity guarantee for this family")]
    UnknownRatioMonotonicity,
    #[error("family has no continuous extension to real arguments")]
    NoContinuousExtension,
    #[error("psi({k}) = 0 under a nonzero harmonic")]
    ZeroMultiplier { k: usize },
    #[error("LP solver made no progress after {iterations} iterations")]
    SolverStall { iterations: usize },
    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
