use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime modulus in [2, 2^31]")]
    InvalidField(u64),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("generated group exceeds the order bound {bound}")]
    OrderBoundExceeded { bound: usize },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("group does not factor as G = G'N: {0}")]
    NotFactorized(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("element is not a central idempotent: {0}")]
    NotCentralIdempotent(String),

    #[error("block idempotent is not invariant: {0}")]
    NotInvariant(String),

    #[error("basis does not span a subalgebra: {0}")]
    NotSubalgebra(String),

    #[error("invalid grading: {0}")]
    InvalidGrading(String),

    #[error("grading groups differ: {0}")]
    GradingMismatch(String),

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a Morita bimodule: {0}")]
    NotMorita(String),

    #[error("M not faithfully balanced: {0}")]
    NotFaithfullyBalanced(String),

    #[error("invalid Delta-module structure: {0}")]
    InvalidDeltaStructure(String),

    #[error("element is not in the centralizer: {0}")]
    NotInCentralizer(String),

    #[error("map is not well defined: {0}")]
    IllDefined(String),

    #[error("hypothesis ({index}) fails: {detail}")]
    Hypothesis { index: u8, detail: String },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}
