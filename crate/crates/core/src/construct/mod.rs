//! Constructive transformations between linear recurrences and counting
//! problems: symbolic Specker polynomials with indeterminate substitution,
//! the recurrence-tree path encoding, and the representation of a recurrence
//! as the difference of two order-invariant counting problems over unary
//! symbols.

mod diffrepr;
mod emit;
mod paths;
mod poly;

pub use diffrepr::{
    eval_diff_representation, eval_diff_with, recurrence_to_diff_representation,
    CompiledDiffRepr,
    DiffSpeckerRepr, ReprBundle, DEFAULT_BRUTE_LIMIT,
};
pub use emit::rec_path_formula;
pub use paths::{
    encode_recurrence_paths, is_valid_path_encoding, path_encoding_sum_exhaustive,
    recurrence_tree_polynomial, PathEncoding,
};
pub use poly::{
    eval_specker_polynomial, eval_specker_polynomial_dp, substitute_indeterminates, Factor,
    GuardClause, PositionPred, SpeckerPolynomial,
};

use crate::counting::CountError;
use crate::logic::LogicError;
use crate::series::SeriesError;
use crate::words::WordsError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error(transparent)]
    Series(#[from] SeriesError),

    #[error(transparent)]
    Count(#[from] CountError),

    #[error(transparent)]
    Words(#[from] WordsError),

    #[error(transparent)]
    Logic(#[from] LogicError),

    #[error("evaluation index must be at least 1, got {0}")]
    IndexOutOfRange(i64),

    #[error("recurrence must be indexed from 1, got base {0}")]
    BaseMustBeOne(i64),

    #[error("indeterminate {index} has no assigned value")]
    UnassignedIndeterminate { index: usize },

    #[error("bound symbol '{symbol}' is not unary; position DP needs unary symbols")]
    NonUnaryBoundSymbol { symbol: String },

    #[error("recurrence takes a negative value at index {at}")]
    NegativeValues { at: i64 },

    #[error("counting lanes disagree at n = {n}: brute {brute}, word-DP {dp}")]
    OracleDisagreement { n: usize, brute: String, dp: String },

    #[error("recurrence has no coefficients")]
    EmptyRecurrence,

    #[error("assignment space too large for brute evaluation ({bits} bits)")]
    BruteSpaceTooLarge { bits: u64 },

    #[error("internal validation failed in {context}")]
    ValidationFailed { context: &'static str },
}
