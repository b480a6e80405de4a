//! Sentences over ordered unary vocabularies, viewed as word languages over
//! the power-set alphabet of the symbols, compiled to finite automata.

mod compile;
mod dfa;
mod transfer;

pub use compile::compile_word_formula;
pub use dfa::{Dfa, DfaJson};
pub use transfer::{count_words, recurrence_from_dfa, transfer_matrix, TransferMatrix};

use crate::logic::LogicError;
use crate::series::SeriesError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("symbol '{symbol}' has arity {arity}; word formulas need unary symbols")]
    NonUnarySymbol { symbol: String, arity: usize },

    #[error("symbol '{symbol}' is not counted; word models carry no fixed relations")]
    UncountedSymbol { symbol: String },

    #[error(transparent)]
    Logic(#[from] LogicError),

    #[error(transparent)]
    Series(#[from] SeriesError),

    #[error("automaton construction exceeded {states} states")]
    StateExplosion { states: usize },

    #[error("internal validation failed in {context}")]
    ValidationFailed { context: &'static str },

    #[error("automata over different alphabets cannot be combined")]
    WidthMismatch,
}
