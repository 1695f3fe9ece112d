use alloc::string::String;

use crate::portrait::Portrait;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: u32, right: u32 },
    #[error("depth {0} exceeds the supported maximum")]
    DepthTooLarge(u32),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: u64, degree: u64 },
    #[error("permutation degree {found} does not match expected degree {expected}")]
    DegreeMismatch { expected: u64, found: u64 },
    #[error("image table is not a bijection")]
    NotAPermutation,
    #[error("permutation moves block {block} of level {level} outside the block system")]
    NotInSigma { level: u32, block: u64 },
    #[error("{what} index {index} out of range")]
    IndexOutOfRange { what: &'static str, index: u32 },
    #[error("group of order 2^{log2_order} exceeds enumeration bound 2^{bound}")]
    TooLarge { log2_order: u32, bound: u32 },
    #[error("quotient of order 2^{log2_index} exceeds bound 2^{bound}")]
    QuotientTooLarge { log2_index: u32, bound: u32 },
    #[error("subgroup is not contained in the base group Q_n")]
    NotInQ,
    #[error("node orders differ")]
    OrderMismatch,
    #[error("subgroup is not normal: {0}")]
    NotNormal(&'static str),
    #[error("group at depth {depth} is not invariant under the root swap")]
    NotSymmetric { depth: u32 },
    #[error("group at depth {depth} is not of split shape: {reason}")]
    ShapeViolation { depth: u32, reason: &'static str },
    #[error("bracket hypothesis fails for commutator {}", .0.to_hex())]
    HypothesisFailed(Portrait),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: &'static str },
    #[error("unknown group key `{0}`")]
    UnknownGroup(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
