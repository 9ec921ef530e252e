use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is numerically singular (pivot {pivot:e}, threshold {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("inverse relation is not the graph of an everywhere defined operator")]
    NotAGraph,

    #[error("A B* is not self-adjoint (defect {defect:e}, tolerance {tolerance:e})")]
    NotSelfAdjointCondition { defect: f64, tolerance: f64 },

    #[error("(A|B) has rank {rank}, expected {n}")]
    RankDeficient { rank: usize, n: usize },

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("numerically singular intermediate: {0}")]
    NumericallySingular(String),

    #[error("B is singular, the extension is not disjoint from the reference one")]
    NotDisjoint,

    #[error("{0} lies on the branch cut of the square root")]
    OnBranchCut(C64),

    #[error("z = {0} is outside the resolvent set of the reference operator")]
    OutsideResolventSet(C64),

    #[error("evaluation point coincides with center {0}")]
    PointAtCenter(usize),

    #[error("kernel evaluated at coincident points")]
    CoincidentPoints,

    #[error("z and conj(ζ) coincide")]
    CoincidentSpectralParams,

    #[error("B Q(z) - A is singular at z = {0}")]
    SingularAtZ(C64),

    #[error("eigenpair verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("bad scan range: {0}")]
    BadRange(String),
}

use crate::matops::C64;
