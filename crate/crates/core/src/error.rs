use thiserror::Error;

/// Errors surfaced by the bound computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Parameters that do not describe a valid instance at all.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Parameters are valid, but outside the range where a closed-form
    /// expression (or certificate family) applies.
    #[error("outside closed-form domain: {0}")]
    OutsideDomain(String),

    /// A brute-force routine was asked to work above its desk-scale cap.
    #[error("{what} exceeds desk-scale cap: {size} > {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("linear program is infeasible")]
    Infeasible,

    /// Shapes or index sets that do not line up.
    #[error("dimension mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn outside(msg: impl Into<String>) -> Error {
    Error::OutsideDomain(msg.into())
}
