use thiserror::Error;

use crate::kleene::TritWord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    // ----- ternary values ---------------------------------------------------
    #[error("invalid trit character {0:?} (expected 0, 1 or u)")]
    InvalidTrit(char),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("{unstable} unstable positions exceed the enumeration capacity of {limit}")]
    CapacityExceeded { unstable: usize, limit: usize },
    #[error("superposition of an empty collection")]
    EmptyCollection,
    #[error("function returned words of inconsistent length ({expected} and {found})")]
    InconsistentOutputLength { expected: usize, found: usize },

    // ----- circuits ---------------------------------------------------------
    #[error("netlist line {line}: {message}")]
    Netlist { line: usize, message: String },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("circuit expects {expected} inputs, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("Boolean evaluation requires a stable input, got {0}")]
    UnstableInput(TritWord),
    #[error("exhaustive check needs {needed} oracle evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("ternary table line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    // ----- machines ---------------------------------------------------------
    #[error("machine description line {line}: {message}")]
    MachineSyntax { line: usize, message: String },
    #[error("undefined state {0:?}")]
    UndefinedState(String),
    #[error("duplicate transition for ({state}, {symbol})")]
    DuplicateTransition { state: String, symbol: char },
    #[error("transition function has no entry for ({state}, {symbol})")]
    PartialTransition { state: String, symbol: char },
    #[error("cannot step a configuration that is already in a final state")]
    AlreadyHalted,
    #[error("natural machine: {0}")]
    NaturalMachine(String),
    #[error("natural machine wrote an unstable blank flag at step {step}")]
    UnstableBlank { step: u64 },

    // ----- universal simulation ---------------------------------------------
    #[error("machine did not halt on resolution {witness} within {budget} steps")]
    NonTotalWithinBudget { witness: TritWord, budget: u64 },
    #[error("machine produced {output:?} on {input}, expected a single trit")]
    NonSingleBitOutput { input: TritWord, output: TritWord },

    // ----- decision problems ------------------------------------------------
    #[error("malformed instance: {0}")]
    InstanceMalformed(String),
    #[error("bound {0} is not of the form 2^i + 1 with i >= 1")]
    MalformedBound(u64),
    #[error("formula: {0}")]
    Formula(String),
}
