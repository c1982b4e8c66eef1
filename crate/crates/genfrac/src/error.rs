//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building kernels, running quadrature,
/// or iterating a solver.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A gamma-function pole makes a kernel undefined.
    #[error("pole error: {0}")]
    Pole(String),

    /// A series was evaluated outside its disc of convergence, or the terms
    /// were detected to grow.
    #[error("divergence: {0}")]
    Divergence(String),

    /// A series did not meet the tail tolerance within the allowed number
    /// of terms. Carries the last tail estimate.
    #[error("series not converged after {terms} terms (last tail estimate {tail:.3e})")]
    Truncation { terms: usize, tail: f64 },

    /// The leading Gamma-weighted coefficient vanishes, so no reciprocal
    /// kernel exists.
    #[error("non-invertible kernel: {0}")]
    NonInvertible(String),

    /// Too few grid nodes for the requested finite-difference order.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// A fixed-point iteration was observed to diverge.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// An iteration hit its step limit. Carries the last residual.
    #[error("iteration limit after {iters} iterations (residual {residual:.3e})")]
    IterationLimit { iters: usize, residual: f64 },

    /// The function psi is not admissible (not monotonic or not C^1 on the
    /// grid).
    #[error("invalid psi: {0}")]
    InvalidPsi(String),

    /// Evaluation requested at a node where the result is singular.
    #[error("singular node: {0}")]
    SingularNode(String),

    /// A caller supplied fewer derivative slots than the requested order.
    #[error("arity error: {0}")]
    Arity(String),

    /// The operation is only defined for base point a = 0.
    #[error("unsupported base point: {0}")]
    UnsupportedBasePoint(String),

    /// Text input (kernel spec, function spec, problem file) failed to parse.
    #[error("parse error at byte {pos}: expected {expected}, found {found}")]
    Parse {
        pos: usize,
        expected: String,
        found: String,
    },

    /// File I/O wrapper for CSV and problem files.
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of a numerical process (divergent series, stalled
    /// iterations) as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergence(_)
                | Error::Truncation { .. }
                | Error::NoConvergence(_)
                | Error::IterationLimit { .. }
        )
    }

    /// True for malformed textual input.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Arity(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
