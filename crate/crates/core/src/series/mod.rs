//! Linear recurrences with constant coefficients, minimal-recurrence
//! detection, rational generating functions, the sum/product/star algebra of
//! rational series, and ultimate-periodicity detection modulo m.

mod bm;
mod combine;
mod gf;
mod linrec;
mod multipoly;
mod periodicity;

pub use bm::{
    berlekamp_massey, berlekamp_massey_mod_p, detect_integer_recurrence, minimize_linrec,
    BmResult, Field, PrimeField, RationalField,
};
pub use combine::{char_poly, combine_recurrences, companion_matrix, CombineOp};
pub use gf::{eval_rational_expr, gf_from_linrec, gf_to_linrec, RationalExpr, RationalGF};
pub use linrec::{
    eval_linrec, eval_linrec_in, generate_terms, generate_terms_in, IntRing, LinRec, LinRecJson,
    LinRecOf, ModRing, PolyRing, Ring,
};
pub use multipoly::MultiPoly;
pub use periodicity::{detect_periodicity_mod, PeriodicityReport, PeriodicityVerdict};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("index {n} below the recurrence base {base}")]
    IndexBelowBase { n: i64, base: i64 },

    #[error("prefix too short to stabilize; order {unstable_order} not confirmed")]
    PrefixTooShort { unstable_order: usize },

    #[error("minimal recurrence of order {order} has non-integer coefficients")]
    NonIntegralRecurrence { order: usize },

    #[error("star requires a series with zero constant term")]
    StarOfUnit,

    #[error("denominator constant term must be 1")]
    DenominatorConstantNotOne,

    #[error("internal validation failed in {context}")]
    ValidationFailed { context: &'static str },

    #[error("modulus {m} is composite; recurrence detection needs a prime field")]
    CompositeModulus { m: u64 },

    #[error("recurrence coefficient does not fit in an i64")]
    CoeffOverflow,

    #[error("hadamard combination requires preperiod 0 on both inputs")]
    HadamardNeedsNoPreperiod,

    #[error("operation requires index base 0, got {0}")]
    BaseNotZero(i64),
}
