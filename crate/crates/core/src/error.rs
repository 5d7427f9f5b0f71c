//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Rejected input (cut positions, non-positive α or λ, malformed flags).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Evaluation at a pole of Γ.
    #[error("gamma pole: {0}")]
    GammaPole(String),

    /// Saddles coincide (or nearly so) where a simple-saddle routine was asked for.
    #[error("coalescent saddles: {0}")]
    Coalescent(String),

    /// Requested evaluation too close to a double point for the two-saddle expansion.
    #[error("near coalescence: {0}")]
    NearCoalescence(String),

    /// Root reversion found the wrong leading behavior.
    #[error("wrong saddle order: {0}")]
    WrongSaddleOrder(String),

    /// Branch continuation could not advance; carries the last good z.
    #[error("branch continuation failed at z = {re}+{im}i: {why}")]
    Continuation { re: f64, im: f64, why: String },

    /// Implicit-curve tracing could not advance; carries the last good point.
    #[error("curve tracing failed at z = {re}+{im}i: {why}")]
    Trace { re: f64, im: f64, why: String },

    /// Branch probe could not decide a square-root or cube-root orientation.
    #[error("branch ambiguous: {0}")]
    BranchAmbiguous(String),

    /// Catch-all numerical failure (non-convergence, precision exhaustion).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
