use thiserror::Error;

use crate::ramanujan::Disagreement;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ring order {order} exceeds the configured cap of {cap} elements")]
    CapExceeded { order: usize, cap: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed operation table: {0}")]
    MalformedTable(String),

    #[error("ring axiom violated: {0}")]
    AxiomViolation(String),

    #[error("operation requires a ring with unity")]
    NonUnital,

    #[error("presentation {0} describes a non-commutative ring")]
    NonCommutative(char),

    #[error("ring is not local")]
    NotLocal,

    #[error("the generator x must be a nonzero element")]
    ZeroGenerator,

    #[error("element index {index} out of range for a ring of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    #[error("subset is not closed under the ring operations: {0}")]
    NotClosed(String),

    #[error("subset is not an ideal: {0}")]
    NotAnIdeal(String),

    #[error("brute-force isomorphism search is limited to order {limit}, got {order}")]
    IsomorphismBound { order: usize, limit: usize },

    #[error("connection set is not closed under negation")]
    AsymmetricConnectionSet,

    #[error("adjacency matrix has loops")]
    HasLoops,

    #[error("graph with {0} vertices exceeds the vertex cap")]
    GraphTooLarge(usize),

    #[error("eigenvalue {0} is not present in the spectrum")]
    MissingEigenvalue(i64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NonConvergence { sweeps: usize, off_norm: f64 },

    #[error("eigenvalue {value} is {residual:e} away from the nearest integer")]
    RoundingResidual { value: f64, residual: f64 },

    #[error("rounded eigenvalues sum to {rounded}, but the trace is {trace}")]
    TraceMismatch { rounded: i64, trace: i64 },

    #[error("closed-form value {0} is not an integer")]
    NonIntegral(String),

    #[error("empty profile")]
    EmptyProfile,

    #[error("Ramanujan verdicts disagree: {0}")]
    VerdictDisagreement(Box<Disagreement>),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("{0} has no unity; a ring built from factors must be unital")]
    NonUnitalFactor(String),

    #[error("expected {expected} coordinates, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("coordinate out of range: {0}")]
    CoordinateOutOfRange(String),
}
