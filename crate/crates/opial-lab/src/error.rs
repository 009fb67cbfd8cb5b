//! Error type shared by all modules.
//!
//! The variants mirror the failure modes that actually occur in the library:
//! invalid arguments, violated mathematical preconditions, exhausted
//! evaluation budgets (which still carry the best estimate — an accuracy
//! failure is never a silent wrong answer), and solver breakdowns.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (non-positive length, exponent out of range, point outside `[0, L]`, …).
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition on the *function* being tested is violated
    /// (e.g. nonzero boundary value or nonzero mean where zero is required).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An iterative evaluation hit its budget before reaching the requested
    /// accuracy.  Carries the best estimate and its a-posteriori error bound
    /// so callers can still inspect (but not silently use) the result.
    #[error(
        "accuracy budget exhausted after {evaluations} evaluations: {context} \
         (best estimate {best:e}, error estimate {error_estimate:e})"
    )]
    Accuracy {
        context: String,
        best: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// A solver (root bracketing, bisection, Newton, fixed-point iteration)
    /// failed to produce a usable answer; the message carries diagnostics.
    #[error("solver failure: {0}")]
    Solver(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn solver(msg: impl Into<String>) -> Self {
        Error::Solver(msg.into())
    }
}

/// Validates that `value` is finite and strictly positive; used by the many
/// operations whose arguments are lengths, multipliers or tolerances.
pub(crate) fn require_positive(name: &str, value: f64) -> Result<f64> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::domain(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(value)
}

/// Validates a nonlinearity exponent.  The library works with `p ≥ 1`
/// throughout: `p > 1` is the genuinely nonlinear regime and `p = 1` is
/// accepted everywhere as the linear consistency case (the sine/eigenvalue
/// limit all formulas degenerate to).
pub(crate) fn require_exponent(p: f64) -> Result<f64> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::domain(format!(
            "exponent p must satisfy p > 1 (p = 1 is accepted as the linear \
             consistency limit), got {p}"
        )));
    }
    Ok(p)
}
