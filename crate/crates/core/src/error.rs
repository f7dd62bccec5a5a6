use thiserror::Error;

use crate::poly::VarId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable {var} out of range for {n_vars} variables")]
    VarOutOfRange { var: VarId, n_vars: usize },
    #[error("variable {0} repeated inside one monomial")]
    DuplicateVar(VarId),
    #[error("assignment has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("pair decomposition needs two distinct variables, got {0} twice")]
    SamePair(VarId),
    #[error("invalid rational literal {0:?}")]
    BadRational(String),

    #[error("backward difference along index {index} taken at level 0")]
    DifferenceAtZero { index: usize },
    #[error("index {0} repeated in a mixed difference")]
    DuplicateIndex(usize),
    #[error("label grid with {points} points exceeds table cap {cap}")]
    GridTooLarge { points: u128, cap: usize },
    #[error("pairwise term g is not convex: g({d}+1) - g({d}) < g({d}) - g({d}-1)")]
    NonConvex { d: usize },
    #[error("levels of variable {var} are not ordered")]
    UnorderedLevels { var: usize },
    #[error("ordering penalty constant must be positive")]
    NonPositivePenalty,
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("{n} variables exceed the brute-force cap {cap}")]
    BruteCapExceeded { n: usize, cap: usize },
    #[error("pair ({i}, {j}) has {size} context variables, exceeding cap {cap}")]
    PairContextExceeded { i: VarId, j: VarId, size: usize, cap: usize },
    #[error("boundary must fix exactly the complement of the block; variable {0} is missing")]
    IncompleteBoundary(VarId),
    #[error("coefficients too large for exact 128-bit evaluation")]
    Overflow,

    #[error("gadget precondition violated: {0}")]
    GadgetPrecondition(String),
    #[error("positive quadratic coefficient on pair ({i}, {j})")]
    PositivePair { i: VarId, j: VarId },
    #[error("polynomial is not in P_suf: pair ({i}, {j}) has a_ij + sum b+ = {excess} > 0")]
    NotInPsuf { i: VarId, j: VarId, excess: String },
    #[error("malformed network: {0}")]
    MalformedNetwork(String),

    #[error("empty set of free variables")]
    EmptyPartition,
    #[error("partition size must be at least 1")]
    ZeroPartitionSize,
    #[error("block of {size} variables cannot be solved: not in P_suf and above brute cap")]
    BlockUnsolvable { size: usize },
    #[error("sandwich x0 <= x1 violated at variable {0}; input is not submodular")]
    SandwichViolated(VarId),
    #[error("no applicable solver for {n} free variables")]
    NoApplicableMethod { n: usize },
    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error("image error: {0}")]
    Image(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors meaning "this method cannot handle this input", as
    /// opposed to malformed input or a broken invariant.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::BruteCapExceeded { .. }
                | Error::PairContextExceeded { .. }
                | Error::NotInPsuf { .. }
                | Error::PositivePair { .. }
                | Error::BlockUnsolvable { .. }
                | Error::NoApplicableMethod { .. }
                | Error::GridTooLarge { .. }
                | Error::Overflow
        )
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Verification(_) | Error::SandwichViolated(_))
    }
}
