use alloc::string::String;
use alloc::vec::Vec;

use crate::rational::Rational;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("bracket is not skew: c({i},{j}) and c({j},{i}) disagree along e{k}")]
    NotSkew { i: usize, j: usize, k: usize },

    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k})")]
    JacobiViolation { i: usize, j: usize, k: usize },

    #[error("bilinear form does not have the declared symmetry at ({i}, {j})")]
    SymmetryViolation { i: usize, j: usize },

    #[error("metric is singular (rank {rank} < {dim})")]
    SingularMetric { rank: usize, dim: usize },

    #[error("connection is not torsion-free")]
    NotTorsionFree,

    #[error("connection is not locally flat")]
    NotFlat,

    #[error("product is not Koszul-Vinberg (left-symmetric)")]
    NotKV,

    #[error("product is not associative")]
    NotAssociative,

    #[error("endomorphism is neither self-adjoint nor skew-adjoint for the metric")]
    NotSelfOrSkewAdjoint,

    #[error("candidate connection's torsion does not match the bracket (candidate {index})")]
    TorsionMismatch { index: usize },

    #[error("subspace is not a right ideal: basis element {element} times e{generator} leaves it")]
    NotRightIdeal { element: usize, generator: usize },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("conformance mismatch: {0}")]
    ConformanceMismatch(String),

    #[error("parameter outside the model domain")]
    DomainViolation,

    #[error("probabilities sum to {0}, not 1")]
    NonNormalized(f64),

    #[error("Fisher information is singular")]
    SingularFisher,

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}

/// Witness of a failed linear identity: where it failed and by how much.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub index: Vec<usize>,
    pub value: Rational,
}
