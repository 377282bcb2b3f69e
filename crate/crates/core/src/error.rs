use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vectors do not span the ambient space (rank {rank} < {dim})")]
    NotFullRank { rank: usize, dim: usize },
    #[error("lattice is not contained in the integer lattice")]
    NotIntegerSublattice,
    #[error("direction vector is zero")]
    DegenerateDirection,
    #[error("target lattice is not a sub-lattice of the source lattice")]
    NotSublattice,
    #[error("input contains the zero vector")]
    ZeroVector,
    #[error("input vector {0} has a negative coordinate")]
    NegativeCoordinate(String),
    #[error("linear combination evaluates to the zero vector")]
    InvalidCombination,
    #[error("evaluation point is a pole of the rational function")]
    PoleAtPoint,
    #[error("invalid subdivision: {0}")]
    BadSubdivision(String),
    #[error("chambers are not sufficiently refined by the vector set")]
    NotRefined,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("unsupported root system: {0}")]
    UnsupportedRootSystem(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
