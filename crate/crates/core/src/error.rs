use thiserror::Error;

use crate::level::MAX_LEVEL;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("level {0} is out of range (0..={MAX_LEVEL})")]
    LevelOutOfRange(u32),

    #[error("element {value} does not belong to the algebra at level {level}")]
    ElementOutOfRange { value: u64, level: u32 },

    #[error("cannot reduce from level {from} to the larger level {to}")]
    ReductionUpward { from: u32, to: u32 },

    #[error("work budget of {0} steps exceeded")]
    BudgetExceeded(u64),

    #[error("table at level {level} needs more than the {budget}-byte memory budget")]
    MemoryBudget { level: u32, budget: u64 },

    #[error("accelerated row {row} at level {level} disagrees with the naive fill")]
    AccelMismatch { level: u32, row: u64 },

    #[error("row {row} at level {level} has period {period}, which is not a power of two")]
    NonPowerOfTwoPeriod { level: u32, row: u64, period: u64 },

    #[error("level {level} lies above the residue cap {cap}")]
    CapExceeded { level: u32, cap: u32 },

    #[error("residue vector is not compatible at level {level}")]
    IncompatibleResidues { level: u32 },

    #[error("the period of the zero element is undefined")]
    ZeroPeriod,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Hypothesis(#[from] HypothesisError),
}

/// A violated hypothesis of one of the structure lemmas, naming the clause.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypothesisError {
    #[error("{name} = {value} is not a power of two")]
    NotPowerOfTwo { name: &'static str, value: u64 },

    #[error("digit y = {y} is not below 2^{n}")]
    DigitTooLarge { y: u64, n: u32 },

    #[error("2^{shift} does not divide {name} = {value}")]
    NotDivisible {
        name: &'static str,
        value: u64,
        shift: u32,
    },

    #[error("period 2^{log} of {element} exceeds the bound 2^{bound}")]
    PeriodTooLong { element: u64, log: u32, bound: u32 },

    #[error("{element} is not in the subalgebra generated by {generator}")]
    NotInSubalgebra { element: u64, generator: u64 },

    #[error("span s' - s = {span} exceeds every power of two dividing 2s = {double}")]
    SpanTooLarge { span: u32, double: u64 },

    #[error("s = {s} exceeds s' = {s2}")]
    Unordered { s: u32, s2: u32 },

    #[error("index i' = {index} is not below 2^{bound}")]
    IndexTooLarge { index: u64, bound: u32 },

    #[error("a = {a} has no decomposition 2^{n}x + y with x < 2^{n} and y < 2^{n} - 1")]
    NoDecomposition { a: u64, n: u32 },

    #[error("y = {y} must be below 2^{n} - 1")]
    FullDigit { y: u64, n: u32 },

    #[error("{name} must be nonzero")]
    Zero { name: &'static str },

    #[error("y = {y} is not the full digit 2^{n} - 1")]
    NotFullDigit { y: u64, n: u32 },

    #[error("subalgebra of {x} has {size} elements, not the maximal 2^{popcount}")]
    BoundNotAttained { x: u64, size: u64, popcount: u32 },

    #[error("parameters overflow a 64-bit element")]
    Overflow,
}
