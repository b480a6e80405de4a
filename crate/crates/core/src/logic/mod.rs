//! Vocabularies, finite relational structures, the sentence syntax, and
//! model-checking semantics.

mod eval;
mod formula;
mod parse;
mod structure;
mod vocabulary;

pub use eval::{evaluate, CompiledFormula, Env};
pub use formula::{classify_fragment, Formula, Fragment, FragmentTag};
pub use parse::{parse_formula, parse_formula_with_free};
pub use structure::{Relation, Structure, StructureJson};
pub use vocabulary::{SymbolDecl, Vocabulary};

pub(crate) use structure::sequence_to_ranks;

/// Assemble the evaluation context used by in-crate hot loops.
pub(crate) fn eval_context<'a>(
    n: usize,
    ranks: Option<&'a [u32]>,
    relations: &'a [Relation],
) -> eval::EvalContext<'a> {
    eval::EvalContext {
        n,
        ranks,
        relations,
    }
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("unknown relation symbol '{0}'")]
    UnknownSymbol(String),

    #[error("symbol '{symbol}' has arity {expected}, got {got} terms")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },

    #[error("unbound variable '{0}'")]
    UnboundVariable(String),

    #[error("invalid modular quantifier: residue {residue} modulus {modulus}")]
    BadModQuantifier { residue: u32, modulus: u32 },

    #[error("duplicate symbol '{0}' in vocabulary")]
    DuplicateSymbol(String),

    #[error("symbol '{0}' has arity 0; arities must be positive")]
    ZeroArity(String),

    #[error("formula uses '<' but the structure carries no order")]
    MissingOrder,

    #[error("no assignment for free variable '{0}'")]
    MissingAssignment(String),

    #[error("tuple entry {entry} outside universe [{n}]")]
    ElementOutOfRange { entry: u32, n: usize },

    #[error("order is not a permutation of the universe")]
    OrderNotPermutation,

    #[error("universe size {0} too large for set quantification (max 63)")]
    UniverseTooLarge(usize),
}
