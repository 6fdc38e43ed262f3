use thiserror::Error;

/// Errors across the basis-construction and quadrature pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Geometry the built-in triangulator does not handle (e.g. rings with
    /// holes). Callers may supply an explicit triangulation instead.
    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A linear system whose solution is not pinned down by its nodes.
    #[error("non-unisolvent system: {0}")]
    NonUnisolvent(String),

    /// A reduction family whose leading forms do not span.
    #[error("invalid family: {0}")]
    InvalidFamily(String),

    /// A node set that cannot support the requested exactness degree.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// No rule exists for this domain (e.g. zero-line intersection outside).
    #[error("no rule: {0}")]
    NoRule(String),
}

pub type Result<T> = std::result::Result<T, Error>;
