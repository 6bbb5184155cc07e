use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("subset size {n} out of range for field of order {q}")]
    SizeOutOfRange { n: usize, q: u32 },
    #[error("operands live in different fields (q={left} vs q={right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("element {value} is not reduced modulo {q}")]
    NotReduced { value: u64, q: u32 },
    #[error("divisor set contains no nonzero element")]
    EmptyDivisor,
    #[error("dilation by zero")]
    ZeroDilation,
    #[error("input set is empty")]
    EmptyInput,
    #[error("work {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("hypotheses fail for K={k}: {reason}")]
    HypothesisFailed { k: f64, reason: String },
    #[error("input too small: {0}")]
    TooSmall(String),
    #[error("no collision guaranteed: |B|^k = {tuples} <= q = {q}")]
    NoCollisionInBudget { tuples: u128, q: u32 },
    #[error("surjection construction exceeded {cap} coefficients")]
    IterationCap { cap: usize },
    #[error("map is not surjective: covers {covered} of {q}")]
    NotSurjective { covered: usize, q: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("total mass {total} is below the requested {requested}")]
    MassTooSmall { total: u64, requested: u64 },
    #[error("the two points coincide")]
    EqualPoints,
    #[error("characteristic 2 is not supported here")]
    CharacteristicTwo,
    #[error("-1 is a square modulo {0}")]
    DegenerateField(u32),
    #[error("zero triple does not define a projective object")]
    ZeroTriple,
    #[error("no line assigned to direction {0:?}")]
    MissingDirection([u32; 3]),
    #[error("lines are not pairwise disjoint")]
    NotDisjoint,
    #[error("lines are not pairwise skew")]
    NotSkew,
    #[error("edge ({0}, {1}) is not in A x B")]
    InvalidEdge(u32, u32),
    #[error("no nonzero kernel vector")]
    NoNonzeroSolution,
    #[error("excluded line does not meet the stem in a single point")]
    ExcludedNotMeetingStem,
    #[error("bad frame configuration: {0}")]
    BadConfiguration(String),
    #[error("line does not meet the frame lines at admissible points")]
    DegenerateIntersection,
    #[error("line is degenerate for this map: {0}")]
    DegenerateLine(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
