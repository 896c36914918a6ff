use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown state name `{name}`")]
    UnknownStateName { name: String, line: usize },

    #[error("line {line}: state `{name}` is defined more than once")]
    DuplicateDefinition { name: String, line: usize },

    #[error("line {line}: `{name}` is referenced but has no equation")]
    MissingDefinition { name: String, line: usize },

    #[error("letter {letter} is outside the alphabet 1..={alphabet_size}")]
    LetterOutOfRange { letter: usize, alphabet_size: usize },

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("state index {index} is invalid for a machine with {states} states")]
    InvalidStateIndex { index: usize, states: usize },

    #[error("determinization exceeded {limit} subsets")]
    SubsetBlowup { limit: usize },

    #[error("enumeration needs {needed} words, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("power iteration did not converge in {iterations} iterations; eigenvalue in [{lower}, {upper}]")]
    NoConvergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },

    #[error("a power has more than {limit} states")]
    StateBlowup { limit: usize },

    #[error("walk costs are infinite: the orbit signalizer graph has a costly cycle")]
    InfiniteCosts,
}
