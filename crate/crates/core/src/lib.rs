//! Workbench for counting models of definable classes of finite relational
//! structures and studying the linear recurrences their counting sequences
//! satisfy.
//!
//! The crate is organized around a slow, trusted brute-force counter
//! ([`counting`]), a compiler from sentences over ordered unary vocabularies
//! to finite automata ([`words`]), exact recurrence and generating-function
//! machinery ([`series`]), two constructive transformations between
//! recurrences and counting problems ([`construct`]), substitution-based
//! structure composition ([`index`]), and a catalog of classical counting
//! families with independent oracles ([`catalog`]).
//!
//! All counts are exact big integers. Counting inner loops are data-parallel
//! via rayon when the `parallel` feature (default) is enabled; builds without
//! it fall back to equivalent sequential code paths.

pub mod catalog;
pub mod construct;
pub mod counting;
pub mod index;
pub mod logic;
pub mod series;
pub mod util;
pub mod words;

pub use counting::{check_coi, diff_specker_eval, ordered_specker_count, specker_count};
pub use logic::{classify_fragment, evaluate, parse_formula, Formula, Structure, Vocabulary};
