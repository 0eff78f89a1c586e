//! Crate-wide error type.
//!
//! All point, coordinate, and triple indices reported here are 0-based.

use thiserror::Error;

/// Everything that can go wrong when building or combining the crate's types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance matrix is not square ({rows} rows, {cols} columns in row {row})")]
    NotSquare { rows: usize, cols: usize, row: usize },
    #[error("matrix entry ({0},{1}) is not finite")]
    NotFinite(usize, usize),
    #[error("diagonal entry at point {0} is not zero")]
    NonzeroDiagonal(usize),
    #[error("matrix entries ({0},{1}) and ({1},{0}) disagree beyond tolerance")]
    AsymmetricEntry(usize, usize),
    #[error("distance between points {0} and {1} is not strictly positive")]
    NonpositiveDistance(usize, usize),
    #[error("triangle inequality fails on points ({0},{1},{2})")]
    TriangleViolation(usize, usize, usize),
    #[error("matrix must have at least one point")]
    EmptyMatrix,
    #[error("scale factor must be strictly positive")]
    NonpositiveScale,
    #[error("operation needs more points (or distances) than the space has")]
    TooFewPoints,
    #[error("point subset may not be empty")]
    EmptySubset,
    #[error("point index {0} is out of range for a space on {1} points")]
    IndexOutOfRange(usize, usize),
    #[error("subsets belong to different ambient spaces")]
    MixedSpaces,
    #[error("midpoint set endpoints must be distinct points")]
    SamePoint,
    #[error("relation must contain at least one pair")]
    EmptyRelation,
    #[error("pair ({0},{1}) is out of range for the given spaces")]
    PairOutOfRange(usize, usize),
    #[error("relation is not surjective onto both spaces")]
    NotACorrespondence,
    #[error("block count must lie between 1 and the number of points ({0} requested, {1} points)")]
    BadBlockCount(usize, usize),
    #[error("partition blocks must be disjoint, nonempty, and cover every point")]
    MalformedPartition,
    #[error("matched partitions must have the same number of blocks")]
    MismatchedBlocks,
    #[error("spaces must have the same number of points")]
    CardinalityMismatch,
    #[error("permutation images must be a bijection on 0..{0}")]
    BadPermutation(usize),
    #[error("operands have different dimensions")]
    DimensionMismatch,
    #[error("point count {0} exceeds the supported limit {1} for this operation")]
    TooLarge(usize, usize),
    #[error("coordinate {0} is not strictly positive")]
    NonpositiveCoordinate(usize),
    #[error("distance vector violates the triangle inequality on points ({0},{1},{2})")]
    NotInCone(usize, usize, usize),
    #[error("simplex has more points than the target space")]
    TooManySimplexPoints,
    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(&'static str),
    #[error("distance range must satisfy 0 < low <= high")]
    BadRange,
}

pub type Result<T> = std::result::Result<T, Error>;
