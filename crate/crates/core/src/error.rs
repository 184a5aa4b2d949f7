use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max |m - m†| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("vectors have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("vectors have different sums: {0} vs {1}")]
    SumMismatch(f64, f64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid PVM: {0}")]
    InvalidPvm(String),

    #[error("PVM is degenerate (block {block} has rank {rank:.3})")]
    DegeneratePvm { block: usize, rank: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("channel is not unital (max |Σ M M† - I| = {0:e})")]
    NotUnital(f64),

    #[error("channel is not trace preserving (max |Σ M† M - I| = {0:e})")]
    NotTracePreserving(f64),

    #[error("matrix is not unitary (max |U†U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("bipartite dimensions are required for this operation")]
    MissingDims,

    #[error("pre- and post-selected states are orthogonal (|<φ|ψ>| = {0:e})")]
    OrthogonalSelection(f64),

    #[error("all ABL weights vanish (sum {0:e})")]
    VanishingAbl(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
