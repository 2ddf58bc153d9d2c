use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants are grouped the way the command line front end maps them onto
/// exit codes: malformed input, domain violations (kinematics, convergence,
/// structural preconditions) and exhausted numerical budgets.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty polytope")]
    EmptyPolytope,

    #[error("zero polynomial has no Newton polytope")]
    ZeroPolynomial,

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),

    #[error("vector {0:?} does not lie in the support of the fan")]
    NotInSupport(Vec<i64>),

    #[error("cone is not full-dimensional")]
    NotFullDimensional,

    #[error("cone is not strongly convex")]
    NotStronglyConvex,

    #[error("fan does not refine the target; violating cone {witness:?}")]
    NotRefinement { witness: Vec<Vec<i64>> },

    #[error("fan is not complete")]
    IncompleteFan,

    #[error("fan is not simplicial")]
    NotSimplicial,

    #[error("complexity guard: {what} = {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("set function is not supermodular: z({i:#b}) + z({j:#b}) > z(meet) + z(join)")]
    NotSupermodular { i: u64, j: u64 },

    #[error("set function must vanish on the empty set")]
    NonzeroOnEmpty,

    #[error("subset {0:#b} is not contained in the ground set")]
    NotASubset(u64),

    #[error("set function is reducible")]
    Reducible,

    #[error("not a building set: {0}")]
    NotBuildingSet(String),

    #[error("graph is disconnected; handle its components separately")]
    Disconnected,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("missing kinematic value for {0}")]
    MissingKinematics(String),

    #[error("kinematics are not generic euclidean: {0}")]
    NonGenericKinematics(String),

    #[error("coefficients of factor {0} do not lie in an open half-plane")]
    NotHalfPlane(usize),

    #[error("Newton polytope is degenerate: the Mellin transform never converges")]
    Degenerate,

    #[error("parameters outside the convergence domain; violated rays {violated:?}")]
    NotConvergent { violated: Vec<Vec<i64>> },

    #[error("point lies outside the convergence domain of the graph")]
    OutsideDomain,

    #[error("unregularized pole: {0}")]
    UnregularizedPole(String),

    #[error("pole collision in continuation: {0}")]
    PoleCollision(String),

    #[error("continuation budget exceeded after {0} steps")]
    StepBudget(usize),

    #[error("cubature budget exceeded: estimate error {error:e} after {evaluations} evaluations")]
    CubatureBudget { error: f64, evaluations: usize },

    #[error("series order {0} too high")]
    OrderTooHigh(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
