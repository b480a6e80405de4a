//! Compilation of sentences over ordered unary vocabularies into automata,
//! by structural induction: atoms become two-to-four-state automata, boolean
//! connectives become products and complements, first-order quantifiers
//! compile through a single-position track conjoined with an exactly-one
//! automaton and projected away, set quantifiers project a free track, and
//! the modular counting quantifier multiplies in a residue-vector counter.
//!
//! Words are read from the least position to the greatest, so `<` compiles
//! to track precedence. Position tracks always occupy the top bits and
//! quantifiers nest last-in-first-out, so projection always removes the
//! current top bit.

use super::dfa::{BoolOp, Dfa};
use super::WordsError;
use crate::logic::{Formula, Vocabulary};
use std::collections::{BTreeMap, VecDeque};

const STATE_CAP: usize = 500_000;

/// Compile a sentence into a minimal DFA over the alphabet `2^s`, where `s`
/// is the number of counted unary symbols: the language consists exactly of
/// the words whose induced structure under the natural order satisfies the
/// sentence.
pub fn compile_word_formula(phi: &Formula, vocab: &Vocabulary) -> Result<Dfa, WordsError> {
    for decl in vocab.symbols() {
        if decl.counted && decl.arity != 1 {
            return Err(WordsError::NonUnarySymbol {
                symbol: decl.name.clone(),
                arity: decl.arity,
            });
        }
    }
    phi.well_formed(vocab, &[])?;
    for name in phi.symbols_used() {
        let decl = vocab.symbol(&name).expect("checked by well_formed");
        if !decl.counted {
            return Err(WordsError::UncountedSymbol { symbol: name });
        }
    }
    let symbols: Vec<String> = vocab.counted().map(|d| d.name.clone()).collect();
    let compiler = Compiler { symbols };
    let mut scope = Vec::new();
    let dfa = compiler.compile(phi, &mut scope)?;
    debug_assert_eq!(dfa.width(), compiler.symbols.len());
    Ok(dfa.minimize())
}

struct Compiler {
    symbols: Vec<String>,
}

impl Compiler {
    fn symbol_bit(&self, name: &str) -> usize {
        self.symbols
            .iter()
            .position(|s| s == name)
            .expect("symbol checked before compilation")
    }

    fn var_bit(&self, scope: &[String], name: &str) -> usize {
        let pos = scope
            .iter()
            .rposition(|v| v == name)
            .expect("variable checked before compilation");
        self.symbols.len() + pos
    }

    fn compile(&self, phi: &Formula, scope: &mut Vec<String>) -> Result<Dfa, WordsError> {
        let width = self.symbols.len() + scope.len();
        match phi {
            Formula::True => Ok(const_dfa(width, true)),
            Formula::False => Ok(const_dfa(width, false)),
            Formula::And(a, b) => {
                let x = self.compile(a, scope)?;
                let y = self.compile(b, scope)?;
                Ok(x.product(&y, BoolOp::And)?.minimize())
            }
            Formula::Or(a, b) => {
                let x = self.compile(a, scope)?;
                let y = self.compile(b, scope)?;
                Ok(x.product(&y, BoolOp::Or)?.minimize())
            }
            Formula::Implies(a, b) => {
                let x = self.compile(a, scope)?.complement();
                let y = self.compile(b, scope)?;
                Ok(x.product(&y, BoolOp::Or)?.minimize())
            }
            Formula::Not(a) => Ok(self.compile(a, scope)?.complement().minimize()),
            Formula::Exists(v, body) => {
                scope.push(v.clone());
                let inner = self.compile(body, scope);
                scope.pop();
                let inner = inner?;
                let one = exactly_one(width + 1, width);
                let conj = inner.product(&one, BoolOp::And)?.minimize();
                Ok(project_top(&conj)?.minimize())
            }
            Formula::Forall(v, body) => {
                // forall x f == not exists x not f
                let rewritten = Formula::not(Formula::Exists(
                    v.clone(),
                    Box::new(Formula::not((**body).clone())),
                ));
                self.compile(&rewritten, scope)
            }
            Formula::ExistsSet(v, body) => {
                scope.push(v.clone());
                let inner = self.compile(body, scope);
                scope.pop();
                Ok(project_top(&inner?)?.minimize())
            }
            Formula::ForallSet(v, body) => {
                let rewritten = Formula::not(Formula::ExistsSet(
                    v.clone(),
                    Box::new(Formula::not((**body).clone())),
                ));
                self.compile(&rewritten, scope)
            }
            Formula::CMod {
                residue,
                modulus,
                var,
                body,
            } => {
                scope.push(var.clone());
                let inner = self.compile(body, scope);
                scope.pop();
                let counted = counting_product(&inner?, *residue, *modulus)?;
                Ok(counted.minimize())
            }
            Formula::Rel { symbol, terms } => {
                let rb = self.symbol_bit(symbol);
                let xb = self.var_bit(scope, &terms[0]);
                Ok(bit_implication(width, xb, rb))
            }
            Formula::In { term, set } => {
                let xb = self.var_bit(scope, term);
                let sb = self.var_bit(scope, set);
                Ok(bit_implication(width, xb, sb))
            }
            Formula::Eq(a, b) => {
                let xb = self.var_bit(scope, a);
                let yb = self.var_bit(scope, b);
                Ok(bits_equal(width, xb, yb))
            }
            Formula::Lt(a, b) => {
                let xb = self.var_bit(scope, a);
                let yb = self.var_bit(scope, b);
                Ok(precedence(width, xb, yb))
            }
        }
    }
}

fn const_dfa(width: usize, accept: bool) -> Dfa {
    Dfa::new(width, 0, vec![accept], vec![0; 1 << width])
}

/// Accepts words where every position carrying bit `a` also carries bit `b`.
fn bit_implication(width: usize, a: usize, b: usize) -> Dfa {
    let alphabet = 1usize << width;
    let mut delta = Vec::with_capacity(2 * alphabet);
    for q in 0..2u32 {
        for l in 0..alphabet {
            let bad = (l >> a) & 1 == 1 && (l >> b) & 1 == 0;
            delta.push(if q == 1 || bad { 1 } else { 0 });
        }
    }
    Dfa::new(width, 0, vec![true, false], delta)
}

/// Accepts words where bits `a` and `b` agree at every position.
fn bits_equal(width: usize, a: usize, b: usize) -> Dfa {
    let alphabet = 1usize << width;
    let mut delta = Vec::with_capacity(2 * alphabet);
    for q in 0..2u32 {
        for l in 0..alphabet {
            let differ = (l >> a) & 1 != (l >> b) & 1;
            delta.push(if q == 1 || differ { 1 } else { 0 });
        }
    }
    Dfa::new(width, 0, vec![true, false], delta)
}

/// Accepts words where bit `a` occurs strictly before bit `b` (single-
/// occurrence tracks; garbage placements are filtered by the exactly-one
/// automata conjoined at the quantifier).
fn precedence(width: usize, a: usize, b: usize) -> Dfa {
    let alphabet = 1usize << width;
    // 0: seen neither; 1: seen a; 2: ok; 3: sink
    let mut delta = Vec::with_capacity(4 * alphabet);
    for q in 0..4u32 {
        for l in 0..alphabet {
            let la = (l >> a) & 1 == 1;
            let lb = (l >> b) & 1 == 1;
            let t = match q {
                0 => {
                    if lb {
                        3
                    } else if la {
                        1
                    } else {
                        0
                    }
                }
                1 => {
                    if lb {
                        2
                    } else {
                        1
                    }
                }
                2 => 2,
                _ => 3,
            };
            delta.push(t);
        }
    }
    Dfa::new(width, 0, vec![false, false, true, false], delta)
}

/// Accepts words with exactly one occurrence of `bit`.
fn exactly_one(width: usize, bit: usize) -> Dfa {
    let alphabet = 1usize << width;
    // 0: none; 1: one; 2: more
    let mut delta = Vec::with_capacity(3 * alphabet);
    for q in 0..3u32 {
        for l in 0..alphabet {
            let hit = (l >> bit) & 1 == 1;
            let t = match (q, hit) {
                (0, false) => 0,
                (0, true) => 1,
                (1, false) => 1,
                (1, true) => 2,
                _ => 2,
            };
            delta.push(t);
        }
    }
    Dfa::new(width, 0, vec![false, true, false], delta)
}

/// Remove the top track: nondeterministically guess its bit at each position
/// and determinize by subset construction.
fn project_top(dfa: &Dfa) -> Result<Dfa, WordsError> {
    assert!(dfa.width() >= 1, "no track to project");
    let new_width = dfa.width() - 1;
    let alphabet = 1usize << new_width;
    let top = 1usize << new_width;

    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut delta: Vec<u32> = Vec::new();
    let start = vec![dfa.initial()];
    index.insert(start.clone(), 0);
    order.push(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(set) = queue.pop_front() {
        for l in 0..alphabet {
            let mut next: Vec<usize> = Vec::new();
            for &q in &set {
                for t in [dfa.next(q, l), dfa.next(q, l | top)] {
                    if let Err(pos) = next.binary_search(&t) {
                        next.insert(pos, t);
                    }
                }
            }
            let id = index.len();
            let id = *index.entry(next.clone()).or_insert_with(|| {
                order.push(next.clone());
                queue.push_back(next);
                id
            });
            delta.push(id as u32);
            if index.len() > STATE_CAP {
                return Err(WordsError::StateExplosion { states: index.len() });
            }
        }
    }
    let accepting = order
        .iter()
        .map(|set| set.iter().any(|&q| dfa.is_accepting(q)))
        .collect();
    Ok(Dfa::new(new_width, 0, accepting, delta))
}

/// The modular counting quantifier: simulate, for every placement of the
/// quantified position, the body automaton, tracking how many placements sit
/// in each state modulo `b`. A word is accepted when the accepting
/// placements count to `residue` mod `modulus`.
fn counting_product(body: &Dfa, residue: u32, modulus: u32) -> Result<Dfa, WordsError> {
    assert!(body.width() >= 1);
    let new_width = body.width() - 1;
    let alphabet = 1usize << new_width;
    let top = 1usize << new_width;
    let q_states = body.num_states();
    let b = modulus as u64;

    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct CState {
        null: usize,
        counts: Vec<u8>,
    }

    let start = CState {
        null: body.initial(),
        counts: vec![0; q_states],
    };
    let mut index: BTreeMap<CState, usize> = BTreeMap::new();
    let mut order: Vec<CState> = Vec::new();
    let mut delta: Vec<u32> = Vec::new();
    index.insert(start.clone(), 0);
    order.push(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        for l in 0..alphabet {
            let mut counts = vec![0u8; q_states];
            for (q, &c) in state.counts.iter().enumerate() {
                if c != 0 {
                    let t = body.next(q, l);
                    counts[t] = ((counts[t] as u64 + c as u64) % b) as u8;
                }
            }
            // place the quantified position here
            let placed = body.next(state.null, l | top);
            counts[placed] = ((counts[placed] as u64 + 1) % b) as u8;
            let next = CState {
                null: body.next(state.null, l),
                counts,
            };
            let id = index.len();
            let id = *index.entry(next.clone()).or_insert_with(|| {
                order.push(next.clone());
                queue.push_back(next);
                id
            });
            delta.push(id as u32);
            if index.len() > STATE_CAP {
                return Err(WordsError::StateExplosion { states: index.len() });
            }
        }
    }
    let accepting = order
        .iter()
        .map(|s| {
            let total: u64 = s
                .counts
                .iter()
                .enumerate()
                .filter(|&(q, _)| body.is_accepting(q))
                .map(|(_, &c)| c as u64)
                .sum();
            total % b == residue as u64
        })
        .collect();
    Ok(Dfa::new(new_width, 0, accepting, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{specker_count, CountTask};
    use crate::logic::parse_formula;
    use crate::words::count_words;
    use num_bigint::BigUint;

    fn unary_vocab(names: &[&str]) -> Vocabulary {
        let triples: Vec<(&str, usize, bool)> = names.iter().map(|&n| (n, 1, true)).collect();
        Vocabulary::from_triples(&triples)
    }

    fn brute_count(vocab: &Vocabulary, phi: &Formula, n: usize) -> BigUint {
        specker_count(&CountTask::new(vocab, phi, n).ordered_natural()).unwrap()
    }

    #[test]
    fn all_positions_in_r() {
        let v = unary_vocab(&["R"]);
        let phi = parse_formula("(forall x (rel R x))", &v).unwrap();
        let dfa = compile_word_formula(&phi, &v).unwrap();
        for n in 0..=8 {
            assert_eq!(count_words(&dfa, n), BigUint::from(1u32), "n={n}");
        }
    }

    #[test]
    fn no_consecutive_positions_in_r_is_fibonacci() {
        let v = unary_vocab(&["R"]);
        // no position in R whose successor is in R
        let phi = parse_formula(
            "(not (exists x (exists y (and (and (< x y) (not (exists z (and (< x z) (< z y))))) \
                 (and (rel R x) (rel R y))))))",
            &v,
        )
        .unwrap();
        let dfa = compile_word_formula(&phi, &v).unwrap();
        assert_eq!(dfa.num_states(), 3);
        let expect: Vec<u64> = vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(count_words(&dfa, n), BigUint::from(*e), "n={n}");
        }
        // brute force cross-check
        for n in 0..=12 {
            assert_eq!(count_words(&dfa, n), brute_count(&v, &phi, n), "n={n}");
        }
        assert_eq!(count_words(&dfa, 3), BigUint::from(5u32));
    }

    #[test]
    fn parity_of_r_membership() {
        let v = unary_vocab(&["R"]);
        let phi = parse_formula("(cmod 0 2 x (rel R x))", &v).unwrap();
        let dfa = compile_word_formula(&phi, &v).unwrap();
        assert_eq!(dfa.num_states(), 2);
        assert_eq!(count_words(&dfa, 0), BigUint::from(1u32));
        for n in 1..=10 {
            assert_eq!(
                count_words(&dfa, n),
                BigUint::from(1u64 << (n - 1)),
                "n={n}"
            );
            assert_eq!(count_words(&dfa, n), brute_count(&v, &phi, n), "n={n}");
        }
        assert_eq!(count_words(&dfa, 3), BigUint::from(4u32));
    }

    #[test]
    fn double_negation_compiles_isomorphic() {
        let v = unary_vocab(&["R"]);
        let phi = parse_formula("(cmod 0 2 x (rel R x))", &v).unwrap();
        let nn = Formula::not(Formula::not(phi.clone()));
        let a = compile_word_formula(&phi, &v).unwrap();
        let b = compile_word_formula(&nn, &v).unwrap();
        assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn boolean_homomorphism_on_sampled_words() {
        let v = unary_vocab(&["R", "S"]);
        let f = parse_formula("(cmod 0 2 x (rel R x))", &v).unwrap();
        let g = parse_formula("(forall x (implies (rel S x) (rel R x)))", &v).unwrap();
        let df = compile_word_formula(&f, &v).unwrap();
        let dg = compile_word_formula(&g, &v).unwrap();
        let dand = compile_word_formula(&Formula::and(f.clone(), g.clone()), &v).unwrap();
        let dnot = compile_word_formula(&Formula::not(f.clone()), &v).unwrap();
        let mut rng = crate::util::SplitMix64::new(5);
        for _ in 0..2000 {
            let n = rng.below(9) as usize;
            let word: Vec<usize> = (0..n).map(|_| rng.below(4) as usize).collect();
            assert_eq!(dand.accepts(&word), df.accepts(&word) && dg.accepts(&word));
            assert_eq!(dnot.accepts(&word), !df.accepts(&word));
        }
    }

    #[test]
    fn rejects_binary_symbols_and_uncounted() {
        let v = Vocabulary::from_triples(&[("E", 2, true)]);
        let phi = parse_formula("(forall x (rel E x x))", &v).unwrap();
        assert!(matches!(
            compile_word_formula(&phi, &v),
            Err(WordsError::NonUnarySymbol { .. })
        ));
        let v2 = Vocabulary::from_triples(&[("R", 1, true), ("P", 1, false)]);
        let phi2 = parse_formula("(forall x (rel P x))", &v2).unwrap();
        assert!(matches!(
            compile_word_formula(&phi2, &v2),
            Err(WordsError::UncountedSymbol { .. })
        ));
    }

    #[test]
    fn min_element_in_r() {
        let v = unary_vocab(&["R"]);
        let phi = parse_formula(
            "(forall x (implies (not (exists y (< y x))) (rel R x)))",
            &v,
        )
        .unwrap();
        let dfa = compile_word_formula(&phi, &v).unwrap();
        // n = 0 vacuously accepted; otherwise first letter fixed
        assert_eq!(count_words(&dfa, 0), BigUint::from(1u32));
        for n in 1..=8 {
            assert_eq!(
                count_words(&dfa, n),
                BigUint::from(1u64 << (n - 1)),
                "n={n}"
            );
            assert_eq!(count_words(&dfa, n), brute_count(&v, &phi, n), "n={n}");
        }
    }

    #[test]
    fn stirling2_ordered_formula_counts_partitions() {
        let (v, phi) = crate::catalog::formulas::stirling2_ordered(2);
        let dfa = compile_word_formula(&phi, &v).unwrap();
        for n in 0..=10usize {
            let expect = crate::catalog::oracles::stirling2(n, 2);
            assert_eq!(count_words(&dfa, n), expect, "n={n}");
        }
        for n in 0..=6 {
            assert_eq!(count_words(&dfa, n), brute_count(&v, &phi, n), "n={n}");
        }
    }
}
