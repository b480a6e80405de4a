//! A nonnegative integer recurrence as the difference of two ordered
//! counting problems over unary symbols.
//!
//! The path encoding turns the recurrence value into a weighted sum over
//! partitions of `[n]`; integer weights are then realized by counting:
//! a factor of `|a|` per element of a guarded set `Y` becomes a choice of
//! one of `|a|` labeled blocks partitioning `Y` (so each assignment is
//! multiplied by `|a|^|Y|`), a zero factor forces `Y` empty, and negative
//! factors split the count by the parity of the union of their sets. The
//! two resulting sentences count configurations of positive and negative
//! sign; their difference is the recurrence value.

use super::emit::rec_path_formula;
use super::ConstructError;
use crate::counting::{specker_count, CountTask};
use crate::logic::{parse_formula, Formula, SymbolDecl, Vocabulary};
use crate::series::{generate_terms, LinRec, LinRecJson};
use crate::words::{compile_word_formula, count_words, Dfa};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Brute-force agreement checks run up to this universe size by default.
pub const DEFAULT_BRUTE_LIMIT: usize = 6;

/// Two ordered counting problems over a shared unary vocabulary whose
/// counts differ by the target recurrence's values.
#[derive(Debug, Clone)]
pub struct DiffSpeckerRepr {
    pub vocab: Vocabulary,
    pub f1: Formula,
    pub f2: Formula,
    /// the recurrence realized, rebased to start at 1 with no preperiod
    pub target: LinRec,
    pub block_count: usize,
}

/// Build the representation. The recurrence must generate nonnegative
/// values (checked on a prefix); its preperiod is absorbed by padding the
/// order and the base is moved to 1.
pub fn recurrence_to_diff_representation(
    rec: &LinRec,
) -> Result<DiffSpeckerRepr, ConstructError> {
    if rec.coeffs.is_empty() {
        return Err(ConstructError::EmptyRecurrence);
    }
    if rec.base > 1 {
        return Err(ConstructError::BaseMustBeOne(rec.base));
    }
    // absorb a preperiod into the order: padding with zero coefficients
    // keeps the relation and moves its validity past the irregular head
    let mut padded = rec.clone();
    if padded.preperiod > 0 {
        for _ in 0..padded.preperiod {
            padded.coeffs.push(BigInt::from(0));
        }
        padded.preperiod = 0;
    }
    let target = padded.rebase_forward(1)?;
    let r = target.order();

    // nonnegativity on a prefix
    let window = (2 * r + 8).max(24);
    for (i, t) in generate_terms(&target, window).iter().enumerate() {
        if t.is_negative() {
            return Err(ConstructError::NegativeValues {
                at: target.base + i as i64,
            });
        }
    }

    // guarded sets and their integer constants
    let mut factor_sets: Vec<(String, BigInt)> = Vec::new();
    for (i, c) in target.coeffs.iter().enumerate() {
        factor_sets.push((format!("u{}", i + 1), c.clone()));
    }
    for (i, a) in target.initials[..r].iter().enumerate() {
        factor_sets.push((format!("i{}", i + 1), a.clone()));
    }
    let block_count = factor_sets
        .iter()
        .map(|(_, c)| c.abs().to_usize().unwrap_or(usize::MAX))
        .max()
        .unwrap_or(0);
    let block_count = if block_count >= 2 { block_count } else { 0 };

    let mut decls: Vec<SymbolDecl> = Vec::new();
    for i in 1..=r {
        decls.push(SymbolDecl {
            name: format!("u{i}"),
            arity: 1,
            counted: true,
        });
    }
    for i in 1..=r {
        decls.push(SymbolDecl {
            name: format!("i{i}"),
            arity: 1,
            counted: true,
        });
    }
    decls.push(SymbolDecl {
        name: "s".into(),
        arity: 1,
        counted: true,
    });
    for k in 1..=block_count {
        decls.push(SymbolDecl {
            name: format!("z{k}"),
            arity: 1,
            counted: true,
        });
    }
    let vocab = Vocabulary::new(decls).map_err(ConstructError::Logic)?;

    let mut clauses = rec_path_formula(r);

    // zero factors force their set empty
    for (name, c) in &factor_sets {
        if c.to_i64() == Some(0) {
            clauses.push(Formula::forall(
                "v",
                Formula::not(Formula::rel(name, &["v"])),
            ));
        }
    }
    // elements of a multi-valued set pick exactly one of its labeled blocks
    for (name, c) in &factor_sets {
        let magnitude = c.abs().to_usize().unwrap_or(0);
        if magnitude >= 2 {
            clauses.push(Formula::forall(
                "v",
                Formula::implies(
                    Formula::rel(name, &["v"]),
                    Formula::disj(
                        (1..=magnitude)
                            .map(|k| Formula::rel(&format!("z{k}"), &["v"]))
                            .collect(),
                    ),
                ),
            ));
        }
    }
    for k in 1..=block_count {
        let allowed: Vec<Formula> = factor_sets
            .iter()
            .filter(|(_, c)| {
                let m = c.abs().to_usize().unwrap_or(0);
                m >= 2 && m >= k
            })
            .map(|(name, _)| Formula::rel(name, &["v"]))
            .collect();
        clauses.push(Formula::forall(
            "v",
            Formula::implies(
                Formula::rel(&format!("z{k}"), &["v"]),
                Formula::disj(allowed),
            ),
        ));
    }
    for a in 1..=block_count {
        for b in (a + 1)..=block_count {
            clauses.push(Formula::forall(
                "v",
                Formula::not(Formula::and(
                    Formula::rel(&format!("z{a}"), &["v"]),
                    Formula::rel(&format!("z{b}"), &["v"]),
                )),
            ));
        }
    }

    // sign split over the union of negative-factor sets
    let negatives: Vec<&String> = factor_sets
        .iter()
        .filter(|(_, c)| c.is_negative())
        .map(|(name, _)| name)
        .collect();
    let (f1, f2) = if negatives.is_empty() {
        (Formula::conj(clauses), Formula::False)
    } else {
        let neg_union = Formula::disj(
            negatives
                .iter()
                .map(|name| Formula::rel(name, &["pv"]))
                .collect(),
        );
        let mut even = clauses.clone();
        even.push(Formula::cmod(0, 2, "pv", neg_union.clone()));
        let mut odd = clauses;
        odd.push(Formula::cmod(1, 2, "pv", neg_union));
        (Formula::conj(even), Formula::conj(odd))
    };

    f1.well_formed(&vocab, &[]).map_err(ConstructError::Logic)?;
    f2.well_formed(&vocab, &[]).map_err(ConstructError::Logic)?;

    Ok(DiffSpeckerRepr {
        vocab,
        f1,
        f2,
        target,
        block_count,
    })
}

/// Both problems compiled to automata for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledDiffRepr {
    pub d1: Dfa,
    pub d2: Dfa,
}

impl DiffSpeckerRepr {
    pub fn compile(&self) -> Result<CompiledDiffRepr, ConstructError> {
        Ok(CompiledDiffRepr {
            d1: compile_word_formula(&self.f1, &self.vocab)?,
            d2: compile_word_formula(&self.f2, &self.vocab)?,
        })
    }

    /// Counts of the two problems by brute-force enumeration under the
    /// natural order.
    pub fn count_brute(&self, n: usize) -> Result<(BigUint, BigUint), ConstructError> {
        let c1 = specker_count(&CountTask::new(&self.vocab, &self.f1, n).ordered_natural())?;
        let c2 = specker_count(&CountTask::new(&self.vocab, &self.f2, n).ordered_natural())?;
        Ok((c1, c2))
    }
}

impl CompiledDiffRepr {
    pub fn counts(&self, n: usize) -> (BigUint, BigUint) {
        (count_words(&self.d1, n), count_words(&self.d2, n))
    }

    pub fn eval(&self, n: usize) -> BigInt {
        let (a, b) = self.counts(n);
        BigInt::from(a) - BigInt::from(b)
    }
}

/// Evaluate the difference at `n` through the word-DP lane, with a
/// brute-force agreement check for small `n`. A disagreement between the
/// lanes is a bug guard, reported as an error.
pub fn eval_diff_representation(
    repr: &DiffSpeckerRepr,
    n: usize,
) -> Result<BigInt, ConstructError> {
    if n < 1 {
        return Err(ConstructError::IndexOutOfRange(n as i64));
    }
    let compiled = repr.compile()?;
    eval_diff_with(repr, &compiled, n)
}

/// Like [`eval_diff_representation`] but reusing compiled automata.
pub fn eval_diff_with(
    repr: &DiffSpeckerRepr,
    compiled: &CompiledDiffRepr,
    n: usize,
) -> Result<BigInt, ConstructError> {
    let dp = compiled.eval(n);
    if n <= DEFAULT_BRUTE_LIMIT {
        let (b1, b2) = repr.count_brute(n)?;
        let brute = BigInt::from(b1) - BigInt::from(b2);
        if brute != dp {
            return Err(ConstructError::OracleDisagreement {
                n,
                brute: brute.to_string(),
                dp: dp.to_string(),
            });
        }
    }
    Ok(dp)
}

/// Serialized bundle: the vocabulary, both sentences, and the target
/// recurrence; consumable by the counting front end.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReprBundle {
    pub vocabulary: Vocabulary,
    pub f1: String,
    pub f2: String,
    pub target: LinRecJson,
    pub block_count: usize,
}

impl DiffSpeckerRepr {
    pub fn to_bundle(&self) -> Result<ReprBundle, ConstructError> {
        Ok(ReprBundle {
            vocabulary: self.vocab.clone(),
            f1: self.f1.to_sexpr(),
            f2: self.f2.to_sexpr(),
            target: self.target.to_json_struct().map_err(ConstructError::Series)?,
            block_count: self.block_count,
        })
    }

    pub fn from_bundle(bundle: &ReprBundle) -> Result<DiffSpeckerRepr, ConstructError> {
        let f1 = parse_formula(&bundle.f1, &bundle.vocabulary).map_err(ConstructError::Logic)?;
        let f2 = parse_formula(&bundle.f2, &bundle.vocabulary).map_err(ConstructError::Logic)?;
        Ok(DiffSpeckerRepr {
            vocab: bundle.vocabulary.clone(),
            f1,
            f2,
            target: LinRec::from_json_struct(&bundle.target).map_err(ConstructError::Series)?,
            block_count: bundle.block_count,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{check_coi, CoiStrategy};
    use crate::series::eval_linrec;

    #[test]
    fn doubling_recurrence_has_empty_negative_part() {
        let rec = LinRec::from_i64(&[2], &[1]).with_base(1);
        let repr = recurrence_to_diff_representation(&rec).unwrap();
        assert_eq!(repr.f2, Formula::False);
        let compiled = repr.compile().unwrap();
        for n in 1..=8usize {
            let (c1, c2) = compiled.counts(n);
            assert_eq!(c1, BigUint::from(1u64 << (n - 1)), "n={n}");
            assert_eq!(c2, BigUint::from(0u32));
        }
        assert_eq!(
            eval_diff_representation(&repr, 4).unwrap(),
            BigInt::from(8)
        );
    }

    #[test]
    fn constant_sequence_representation() {
        let rec = LinRec::from_i64(&[1], &[1]).with_base(1);
        let repr = recurrence_to_diff_representation(&rec).unwrap();
        let compiled = repr.compile().unwrap();
        for n in 1..=8usize {
            assert_eq!(
                eval_diff_with(&repr, &compiled, n).unwrap(),
                BigInt::from(1),
                "n={n}"
            );
        }
    }

    #[test]
    fn two_pow_plus_one_representation() {
        let rec = LinRec::from_i64(&[3, -2], &[3, 5]).with_base(1);
        let repr = recurrence_to_diff_representation(&rec).unwrap();
        assert_eq!(repr.block_count, 5);
        let compiled = repr.compile().unwrap();
        assert_eq!(eval_diff_with(&repr, &compiled, 4).unwrap(), BigInt::from(17));
        assert_eq!(eval_diff_with(&repr, &compiled, 5).unwrap(), BigInt::from(33));
        for n in 1..=12usize {
            assert_eq!(
                compiled.eval(n),
                eval_linrec(&repr.target, n as i64).unwrap(),
                "n={n}"
            );
        }
        // the same value through the counting module's signed difference
        let t1 = CountTask::new(&repr.vocab, &repr.f1, 5).ordered_natural();
        let t2 = CountTask::new(&repr.vocab, &repr.f2, 5).ordered_natural();
        assert_eq!(
            crate::counting::diff_specker_eval(&t1, &t2).unwrap(),
            BigInt::from(33)
        );
    }

    #[test]
    fn fibonacci_and_lucas_representations() {
        let fib = LinRec::from_i64(&[1, 1], &[1, 1]).with_base(1);
        let lucas = LinRec::from_i64(&[1, 1], &[1, 3]).with_base(1);
        for (rec, name) in [(fib, "fibonacci"), (lucas, "lucas")] {
            let repr = recurrence_to_diff_representation(&rec).unwrap();
            if name == "fibonacci" {
                assert_eq!(repr.f2, Formula::False);
            }
            let compiled = repr.compile().unwrap();
            for n in 1..=12usize {
                assert_eq!(
                    compiled.eval(n),
                    eval_linrec(&rec, n as i64).unwrap(),
                    "{name} n={n}"
                );
            }
            // brute agreement on small sizes
            for n in 1..=5usize {
                eval_diff_with(&repr, &compiled, n).unwrap();
            }
        }
    }

    #[test]
    fn base_zero_recurrences_are_rebased() {
        let fib0 = LinRec::from_i64(&[1, 1], &[0, 1]);
        let repr = recurrence_to_diff_representation(&fib0).unwrap();
        assert_eq!(repr.target.base, 1);
        let compiled = repr.compile().unwrap();
        for n in 1..=10usize {
            assert_eq!(
                compiled.eval(n),
                eval_linrec(&fib0, n as i64).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn negative_sequences_are_rejected() {
        let rec = LinRec::from_i64(&[-1], &[1]).with_base(1); // 1, -1, 1, -1
        assert!(matches!(
            recurrence_to_diff_representation(&rec),
            Err(ConstructError::NegativeValues { .. })
        ));
    }

    #[test]
    fn both_problems_are_counting_order_invariant() {
        let rec = LinRec::from_i64(&[3, -2], &[3, 5]).with_base(1);
        let repr = recurrence_to_diff_representation(&rec).unwrap();
        for phi in [&repr.f1, &repr.f2] {
            for n in 1..=4usize {
                let task = CountTask::new(&repr.vocab, phi, n).ordered_natural();
                let report = check_coi(&task, CoiStrategy::Exhaustive).unwrap();
                assert!(report.is_invariant(), "n={n}");
            }
        }
    }

    #[test]
    fn bundle_round_trip() {
        let rec = LinRec::from_i64(&[3, -2], &[3, 5]).with_base(1);
        let repr = recurrence_to_diff_representation(&rec).unwrap();
        let bundle = repr.to_bundle().unwrap();
        let text = serde_json::to_string(&bundle).unwrap();
        let parsed: ReprBundle = serde_json::from_str(&text).unwrap();
        let back = DiffSpeckerRepr::from_bundle(&parsed).unwrap();
        assert_eq!(back.f1, repr.f1);
        assert_eq!(back.f2, repr.f2);
        assert_eq!(back.target, repr.target);
    }

    #[test]
    fn preperiod_is_absorbed() {
        // 1, 1, 2, 4, 8, ... with preperiod 1 over base 0
        let mut rec = LinRec::from_i64(&[2], &[1, 1]);
        rec.preperiod = 1;
        let repr = recurrence_to_diff_representation(&rec).unwrap();
        let compiled = repr.compile().unwrap();
        for n in 1..=10usize {
            assert_eq!(
                compiled.eval(n),
                eval_linrec(&rec, n as i64).unwrap(),
                "n={n}"
            );
        }
    }
}
