use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation is not bipartitional")]
    NotBipartitional,

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("ground set size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("size {n} exceeds the limit {max}")]
    SizeLimitExceeded { n: usize, max: usize },

    #[error("bipartition is not compatible with the ordered partition")]
    NotCompatible,

    #[error("invalid code vector: {0}")]
    InvalidCode(String),

    #[error("not a maximal chain: {0}")]
    NotMaximalChain(String),

    #[error("lower bound is not below upper bound")]
    NotAnInterval,

    #[error("no permutation is compatible with both interval ends")]
    NoCompatiblePermutation,

    #[error("skipped intervals do not cover all ranks")]
    UnionNotFull,

    #[error("interval is not regular")]
    NotRegular,

    #[error("interval is not irregular")]
    NotIrregular,

    #[error("parse error: {0}")]
    Parse(String),
}
