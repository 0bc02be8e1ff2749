use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// The result does not fit in an `f64`; use the log-domain variant.
    #[error("overflow in {what}: log-magnitude {log_value:.6e} exceeds f64 range")]
    Overflow { what: &'static str, log_value: f64 },

    /// An iterative or adaptive procedure exhausted its budget.
    #[error("no convergence in {what}: best estimate {estimate:.17e}, error bound {error_bound:.3e}")]
    NonConvergence {
        what: &'static str,
        estimate: f64,
        error_bound: f64,
    },

    /// A truncated series leaves more mass in its tail than allowed.
    #[error("cutoff {cutoff} too small: tail bound {tail_bound:.3e} exceeds {threshold:.3e}")]
    CutoffTooSmall {
        cutoff: usize,
        tail_bound: f64,
        threshold: f64,
    },

    /// Two objects cannot be combined (different modes, cutoffs or grids).
    #[error("incompatible operands: {0}")]
    Incompatible(String),

    /// An input collapses a formula to a meaningless value.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An integral over the given range does not exist.
    #[error("divergent integral: {0}")]
    Divergent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}
