use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("vectors do not span a full-rank lattice (rank {rank} < {dim})")]
    NotFullRank { rank: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vertices are not affinely independent")]
    NotFullDim,
    #[error("origin is not in the strict interior of the simplex")]
    OriginNotInterior,
    #[error("vertex {index} is not a primitive lattice point")]
    NonPrimitiveVertex { index: usize },
    #[error("expected exactly one interior lattice point, found {0}")]
    WrongInteriorCount(usize),
    #[error("lattice point enumeration needs {needed} steps, cap is {cap}")]
    EnumerationCapExceeded { needed: String, cap: u64 },
    #[error("weights are not well-formed")]
    NotWellFormed,
    #[error("index {index} out of range ({range})")]
    IndexOutOfRange { index: i64, range: &'static str },
    #[error("search over vertex permutations refused in dimension {dim} (limit 8)")]
    FactorialGuard { dim: usize },
    #[error("bound value {0} is not an integer")]
    NonIntegralBound(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
