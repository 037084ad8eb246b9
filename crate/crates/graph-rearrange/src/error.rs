//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("expected a {expected} graph, got {found}")]
    WrongFamily { expected: String, found: String },

    #[error("vertex {0} is not interior; window counts would be truncated")]
    NonInteriorVertex(String),

    #[error("duplicate vertex {0} in ordering list")]
    DuplicateVertex(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("neighbor {0} of the prefix is not ranked; enlarge the window")]
    UnrankedNeighbor(String),

    #[error("prefix length {requested} exceeds the valid prefix length {valid}")]
    PrefixRangeExceeded { requested: usize, valid: usize },

    #[error("function support ({support}) exceeds the ordering's valid prefix length ({valid})")]
    SupportTooLarge { support: usize, valid: usize },

    #[error("level threshold must be positive (superlevel sets of nonnegative levels are infinite)")]
    NonPositiveLevel,

    #[error("function must be normalized to sup-norm 1, got {0}")]
    NotNormalized(String),

    #[error("p must be finite for this operation")]
    InfiniteExponent,

    #[error("p must be at least 1, got {0}")]
    ExponentBelowOne(String),

    #[error("subset size {n} exceeds the enumeration guard {max}")]
    SubsetTooLarge { n: usize, max: usize },

    #[error("search box too small: every minimizing witness touches the box border")]
    BoxTooSmall,

    #[error("no closed-form profile for {0}")]
    UnsupportedProfile(String),

    #[error("oracle and closed form disagree for N={n}: oracle {oracle}, closed form {closed_form}")]
    ProfileMismatch {
        n: usize,
        oracle: usize,
        closed_form: usize,
    },

    #[error("vertex-isoperimetric profile is not non-decreasing at N={0}; hypothesis fails")]
    ProfileNotMonotone(usize),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("render is only supported for grid and ladder graphs")]
    UnsupportedRender,

    #[error("functions and orderings must live on the same graph")]
    GraphMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
