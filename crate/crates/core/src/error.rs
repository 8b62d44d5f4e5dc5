use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    GraphFormat { line: usize, msg: String },
    #[error("vertex index {v} out of range 1..={k}")]
    VertexOutOfRange { v: usize, k: usize },
    #[error("duplicate edge {{{i},{j}}}")]
    DuplicateEdge { i: usize, j: usize },
    #[error("self-loop {{{v},{v}}} is not allowed")]
    SelfLoop { v: usize },
    #[error("graph must have at least 2 vertices, got k={0}")]
    KTooSmall(usize),
    #[error("k={k} exceeds the limit {limit} for {what}")]
    KTooLarge {
        k: usize,
        limit: usize,
        what: &'static str,
    },
    #[error("edge count {edges} exceeds the enumeration limit {limit}")]
    TooManyEdges { edges: usize, limit: usize },
    #[error("edge budget j={j} out of range 0..={max}")]
    EdgeBudgetOutOfRange { j: usize, max: usize },
    #[error("r={r} out of range {min}..={max}")]
    ROutOfRange { r: usize, min: usize, max: usize },
    #[error("{0:?} is not a vertex cover")]
    NotACover(Vec<usize>),
    #[error("restrict set must be all vertices or the non-isolated set")]
    InvalidRestrict,
    #[error("local factor coefficients must start with a_0=1, a_1=0, got {0:?}")]
    MalformedFactor(Vec<i64>),
    #[error("oracle input {0} exceeds the supported bound 200")]
    OracleInputTooLarge(u64),
    #[error("tuple length {got} does not match k={k}")]
    TupleLength { got: usize, k: usize },
    #[error("sieve limit {0} out of range 2..=100000000")]
    SieveLimitOutOfRange(u64),
    #[error("prime limit {0} too small, need at least 100")]
    PrimeLimitTooSmall(u64),
    #[error("prime limit {limit} too small for this polynomial (tail precondition M/P^2 <= 1/2 violated, M={m})")]
    TailBoundPrecondition { limit: u64, m: f64 },
    #[error("local factor is non-positive at p={prime}: Q(1/p)={value}")]
    NonPositiveFactor { prime: u64, value: f64 },
    #[error("box [1,{x}]^{k} exceeds the exact-count budget of 10^8 tuples")]
    BoxTooLarge { x: u64, k: usize },
    #[error("inclusion-exclusion oracle limited to k<=4 and x<=50, got k={k}, x={x}")]
    InclusionExclusionGuard { k: usize, x: u64 },
    #[error("{what} must be at least {min}, got {got}")]
    BelowMinimum {
        what: &'static str,
        min: u64,
        got: u64,
    },
    #[error("independent-set/edge-subset local factors disagree for this graph (internal error)")]
    FactorMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
