use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(char),

    #[error("alphabet mismatch: {left:?} vs {right:?}")]
    AlphabetMismatch { left: String, right: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("monoid exceeds the size cap of {0} elements")]
    MonoidTooLarge(usize),

    #[error("element {0} is not in the minimal ideal")]
    NotInMinimalIdeal(usize),

    #[error("the shift is empty")]
    EmptyShift,

    #[error("the shift is not irreducible")]
    NotIrreducible,

    #[error("invalid shift: {0}")]
    InvalidShift(String),

    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("probabilities sum to {0}, expected 1")]
    SumNotOne(f64),

    #[error("negative entry {0}")]
    NegativeEntry(f64),

    #[error("row {row} of the transition matrix sums to {sum}")]
    NonStochasticRow { row: usize, sum: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("measure is not positive")]
    NotPositive,

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0:?} is not a factor of the Fibonacci word")]
    NotAFactor(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
