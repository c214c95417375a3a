use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group order exceeds the cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("permutation degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid stable graph: {0}")]
    InvalidGraph(String),

    #[error("(g, n) = ({g}, {n}) is not stable: need 2g-2+n > 0 and 3g-3+n > 0")]
    Unstable { g: u32, n: u32 },

    #[error("cannot contract the last remaining edge")]
    LastEdge,

    #[error("edge index {edge} out of range for a graph with {edges} edges")]
    EdgeOutOfRange { edge: usize, edges: usize },

    #[error("simplex dimension must be at least 1, got {0}")]
    InvalidDimension(usize),

    #[error("unsupported subdivision level {0} (expected 1 or 2)")]
    InvalidLevel(u8),

    #[error("complex too large: {0}")]
    TooLarge(String),

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("boundary composite is nonzero in degree {degree}")]
    NonzeroComposite { degree: usize },

    #[error("subdivision levels 1 and 2 disagree in degree {degree}: {level1} vs {level2}")]
    LevelDisagreement {
        degree: usize,
        level1: String,
        level2: String,
    },

    #[error("relative mode requires genus >= 1, got g = {g}")]
    RelativeModeRefused { g: u32 },

    #[error("a stable graph with at most two edges lies outside the bm subcomplex")]
    SkeletonOutsideSubcomplex,
}
