use thiserror::Error;

/// Errors produced by every operation in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be at least 2 and n at least 1 (got p={p}, n={n})")]
    InvalidModulus { p: u64, n: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("2 is not a primitive root modulo {p}^2 (order {order}, need {required})")]
    NotPrimitiveRoot { p: u64, order: u64, required: u64 },
    #[error("period {p}^{n} exceeds the limit of {limit}")]
    PeriodTooLarge { p: u64, n: u32, limit: usize },
    #[error("expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid character {ch:?} at offset {offset}")]
    InvalidCharacter { ch: char, offset: usize },
    #[error("positions must differ")]
    EqualPositions,
    #[error("position {position} outside period {period}")]
    PositionOutOfRange { position: usize, period: usize },
    #[error("sequences have different moduli")]
    ModulusMismatch,
    #[error("operation requires an odd prime p")]
    EvenModulus,
    #[error("operation requires p = 2")]
    OddModulus,
    #[error("{value} is not a linear complexity of a {p}^{n}-periodic binary sequence")]
    NotRepresentable { value: u64, p: u64, n: u32 },
    #[error("sequence is zero")]
    ZeroSequence,
    #[error("sequence is not a hypercube")]
    NotAHypercube,
    #[error("sequence is not a cube")]
    NotACube,
    #[error("no unused edge exponent remains")]
    NoEligibleExponent,
    #[error("blocks sum to zero; they form a vertex")]
    IsVertex,
    #[error("blocks are all equal")]
    BlocksEqual,
    #[error("blocks are empty or of unequal length")]
    MalformedBlocks,
    #[error("vertex is not a tuple")]
    NotTupleVertex,
    #[error("tuple vertex has length 0")]
    ZeroLengthVertex,
    #[error("error-pattern enumeration needs {required} evaluations, cap is {cap}")]
    BudgetExceeded { required: u128, cap: u64 },
    #[error("closed form needs a hypercube input")]
    FormulaInapplicable,
    #[error("k = {k} outside [0, {period})")]
    KOutOfRange { k: usize, period: usize },
    #[error("edge exponents must be strictly increasing within [{min}, {n}): {edges:?}")]
    InvalidEdges { edges: Vec<u32>, min: u32, n: u32 },
    #[error("invalid tuple weight l = {l} for p = {p}: {reason}")]
    InvalidL { l: usize, p: u64, reason: &'static str },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
