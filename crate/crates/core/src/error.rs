use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

/// A distance table that is not an ∞-pseudo-metric.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("distance table has {found} entries, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error("d({x}, {x}) is not zero")]
    NonzeroDiagonal { x: usize },
    #[error("d({x}, {y}) != d({y}, {x})")]
    Asymmetric { x: usize, y: usize },
    #[error("negative or NaN distance between {x} and {y}")]
    Negative { x: usize, y: usize },
    #[error("triangle inequality fails: d({x}, {y}) > d({x}, {z}) + d({z}, {y})")]
    Triangle { x: usize, y: usize, z: usize },
    #[error("point index {0} out of range")]
    PointOutOfRange(usize),
}

/// Shape errors in the set-valued matrix algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("index sets differ: {left:?} vs {right:?}")]
    IndexMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("subsets live in spaces of {left} and {right} points")]
    SpaceMismatch { left: usize, right: usize },
    #[error("duplicate index label {0:?}")]
    DuplicateLabel(String),
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("the target space is not the product of the operand spaces")]
    NotAProduct,
}

/// Failures of the decomposition constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("parts {0} and {1} overlap")]
    PartsOverlap(usize, usize),
    #[error("parts do not cover the space ({0} points missed)")]
    PartsDoNotCover(usize),
    #[error("scale must be positive, got {0}")]
    BadScale(String),
    #[error("array is not scale-{scale}-disjoint (entries {first} and {second})")]
    NotScaleDisjoint {
        scale: String,
        first: usize,
        second: usize,
    },
    #[error("certificate does not hold: measured {measured} > claimed {claimed}")]
    InvalidCertificate { measured: String, claimed: String },
    #[error("factor {factor} is not {required}-discrete")]
    NotDiscrete { factor: usize, required: String },
    #[error("row count {rows} does not match {parts} parts")]
    ShapeMismatch { rows: usize, parts: usize },
    #[error("construction defect: {0} failed")]
    Defect(String),
    #[error("space is not a {0}")]
    WrongSpaceKind(&'static str),
}

/// Profile arithmetic errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("profile index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("first function must be constant")]
    NonConstantHead,
    #[error("function is not non-decreasing")]
    Decreasing,
    #[error("breakpoints must have strictly increasing thresholds")]
    UnsortedBreakpoints,
    #[error("a step function needs at least one breakpoint")]
    NoBreakpoints,
    #[error("normalisation needs a leading constant >= 1, got {0}")]
    HeadBelowOne(String),
    #[error("expected a profile of shape (1, f), got length {len} with head {head}")]
    WrongShape { len: usize, head: String },
    #[error("scale sequence too short: need {required}, have {available}")]
    SequenceTooShort { required: usize, available: usize },
    #[error("scale sequence must be positive and non-decreasing")]
    BadSequence,
    #[error("invalid affine rescaling")]
    BadRescale,
    #[error("profile values must be finite and non-negative")]
    BadValue,
}

/// Product-space construction errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("weights must be positive and finite")]
    BadWeight,
    #[error("need {expected} weights, got {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("product has {size} points, over the budget of {budget}")]
    OverBudget { size: usize, budget: usize },
    #[error("point sets differ")]
    PointSetMismatch,
    #[error(transparent)]
    Metric(#[from] MetricError),
}
