use thiserror::Error;

use crate::equivalence::TheoremViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,

    #[error("odd dimension {0}: antisymmetric form has no Pfaffian")]
    OddDimension(usize),

    #[error("degenerate antisymmetric form (Pfaffian is zero)")]
    Degenerate,

    #[error("degenerate lattice: column rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),

    #[error("matrix has non-integer entries")]
    NotIntegral,

    #[error("exhaustive search over budget: {0}; use the normal-form decider instead")]
    OverBudget(String),

    #[error("valuation of zero is undefined")]
    ZeroValuation,

    #[error("analytic torus has no polarization")]
    MissingPolarization,

    #[error("gcd of the l-vector is {0}, expected 1")]
    NonCoprime(String),

    #[error("lattice does not split into at most two special isogenous factors: {0}")]
    NotReducible(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid coefficient data: {0}")]
    InvalidCoefficients(String),

    #[error("cocycle condition fails at (g3, g2, g1) = ({0}, {1}, {2})")]
    NotCocycle(usize, usize, usize),

    #[error("{0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("theorem violation: symplectic and analytic verdicts disagree")]
    TheoremViolation(Box<TheoremViolation>),
}
