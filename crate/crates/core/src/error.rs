use thiserror::Error;

/// Errors raised by model construction, the solvers and the analysis routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("free-boundary root not bracketed on [{lo}, {hi}] (g(lo) = {g_lo}, g(hi) = {g_hi})")]
    Bracketing {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("reaction solve did not converge after {iters} iterations (u = {u}, v = {v}, k = {k}, dt = {dt})")]
    ReactionSolve {
        u: f64,
        v: f64,
        k: f64,
        dt: f64,
        iters: usize,
    },

    #[error("tridiagonal solve broke down at row {row} (pivot {pivot})")]
    TridiagonalBreakdown { row: usize, pivot: f64 },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn require_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        invalid(format!("{name} must be finite, got {x}"))
    }
}
