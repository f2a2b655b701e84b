use alloc::string::String;

/// Errors raised by the computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{0}")]
    Domain(String),
    /// A brute-force enumeration was refused because it would be too large.
    #[error("refusing to enumerate all rooted trees on {n} vertices (limit {limit})")]
    CostGuard { n: usize, limit: usize },
    /// An iterative numerical procedure ran out of budget before meeting its
    /// tolerance.
    #[error("{what} did not converge: {detail}")]
    NoConvergence { what: &'static str, detail: String },
    /// The arbitrary-precision backend reported a failure.
    #[error("precision backend: {0}")]
    Precision(String),
    /// A structural invariant of an input value does not hold.
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
