use thiserror::Error;

/// Errors produced by the code-construction, decoding and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gcd of zero polynomials is undefined")]
    ZeroGcd,

    #[error("generator polynomials are both zero")]
    ZeroGenerators,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not circulant (column {column} is not a shift of its predecessor)")]
    NotCirculant { column: usize },

    #[error("ragged block grid: {0}")]
    RaggedBlocks(String),

    #[error("parity checks do not commute: hx * hz^T has a nonzero entry at ({row}, {col})")]
    CommutativityViolation { row: usize, col: usize },

    #[error("code has dimension zero")]
    ZeroDimension,

    #[error("invalid extension plan: {0}")]
    InvalidPlan(String),

    #[error("member {member}: p^(m) shares a factor {common} with gcd(a, b)")]
    NotCoprime { member: usize, common: String },

    #[error(
        "member {member}: kappa = {kappa} is even, so x^l + 1 and the cyclotomic cofactor share a factor"
    )]
    CofactorNotCoprime { member: usize, kappa: usize },

    #[error("member {member}: closed-form dimension {formula} disagrees with rank dimension {rank}")]
    FormulaMismatch { member: usize, formula: usize, rank: usize },

    #[error("member {member} has an all-zero {what} {index}")]
    ZeroLine { member: usize, what: &'static str, index: usize },

    #[error("invalid Shor distance {0}: must be odd and at least 3")]
    InvalidShorDistance(usize),

    #[error("invalid insertion split: j = {j}, r = {r}, l = {ell} (need 0 < j < l - 1 and r >= 1)")]
    InvalidSplit { j: usize, r: usize, ell: usize },

    #[error("enumeration budget exceeded; distance is at least {lower_bound}")]
    BudgetExceeded { lower_bound: usize },

    #[error("search over {pairs} generator pairs exceeds the budget of {budget}")]
    EnumerationBudget { pairs: u64, budget: u64 },

    #[error("syndrome is not in the column space of the check matrix")]
    InconsistentSyndrome,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no crossing between {0} and {1} on the shared grid")]
    NoCrossing(String, String),

    #[error("artifact error: {0}")]
    Artifact(String),
}

pub type Result<T> = std::result::Result<T, Error>;
