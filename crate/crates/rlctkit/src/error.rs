use thiserror::Error;

/// Errors surfaced by the library. `NodeCap` and `PivotCap` are resource
/// diagnostics; everything else is an input or invariant problem.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("node cap of {0} reached before the blow-up tree was complete")]
    NodeCap(usize),
    #[error("pivot cap of {0} reached in the simplex solver")]
    PivotCap(usize),
    #[error("term cap of {cap} exceeded: expansion would produce at least {estimate} monomials")]
    TermCap { cap: usize, estimate: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
