use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants are grouped by how a caller is expected to react: bad input,
/// unsupported request, exhausted resource budget, or numerical failure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operands belong to different groups: {0}")]
    MixedGroups(String),

    #[error("invalid input: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceCap { what: String, needed: u128, cap: u128 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("generators span a proper subgroup of order {found} (group order {order})")]
    NotGenerating { found: usize, order: usize },

    #[error(
        "S^-1 S generates a subgroup of index {index}; irreducible representations \
         may restrict trivially to it and no separation constant can be certified"
    )]
    IndexTwoObstruction { index: usize },

    #[error("no walk of length {length} from vertex {from} to vertex {to}")]
    NoWalk { from: usize, to: usize, length: usize },

    #[error("no prime in [{lo}, {hi}]; widen the window (larger epsilon)")]
    EmptyPrimeWindow { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
