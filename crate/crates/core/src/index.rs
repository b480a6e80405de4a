//! Pointed structures, the substitution composition, and empirical
//! lower bounds on the number of substitution-inequivalent structures.
//!
//! `subst(A1, A2)` splices `A2` into `A1` at the distinguished element:
//! the universes are joined with `a1` removed, tuples of `A1` avoiding `a1`
//! survive, tuples of `A2` are kept, and every tuple of `A1` through `a1`
//! is replicated with each occurrence of `a1` replaced independently by
//! every element of `A2`. Two structures are distinguished by a pointed
//! context `D` when exactly one of the substitutions lands in the class.

use crate::logic::{evaluate, Env, Formula, LogicError, Relation, Structure, Vocabulary};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error(transparent)]
    Logic(#[from] LogicError),

    #[error("structures interpret different vocabularies")]
    VocabularyMismatch,

    #[error("point {point} outside universe [{n}]")]
    PointOutOfRange { point: u32, n: usize },

    #[error("context enumeration cap of {cap} exceeded")]
    CapExceeded { cap: u64 },
}

/// A structure with a distinguished element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedStructure {
    pub structure: Structure,
    pub point: u32,
}

impl PointedStructure {
    pub fn new(structure: Structure, point: u32) -> Result<Self, IndexError> {
        if point == 0 || point as usize > structure.n() {
            return Err(IndexError::PointOutOfRange {
                point,
                n: structure.n(),
            });
        }
        Ok(PointedStructure { structure, point })
    }
}

/// Substitute `a2` into the distinguished element of `a1`; the result is
/// pointed at `a2`'s point.
pub fn subst_pointed(
    vocab: &Vocabulary,
    a1: &PointedStructure,
    a2: &PointedStructure,
) -> Result<PointedStructure, IndexError> {
    let (structure, map2) = subst_core(vocab, a1, &a2.structure)?;
    PointedStructure::new(structure, map2(a2.point))
}

/// Substitute a plain structure; the result is plain.
pub fn subst(
    vocab: &Vocabulary,
    a1: &PointedStructure,
    a2: &Structure,
) -> Result<Structure, IndexError> {
    Ok(subst_core(vocab, a1, a2)?.0)
}

/// Universe `[n1] ⊔ [n2] - {a1}` relabeled canonically: surviving elements
/// of `A1` keep their relative order as `1..n1-1`, the elements of `A2`
/// follow as `n1..n1+n2-1`.
fn subst_core(
    vocab: &Vocabulary,
    a1: &PointedStructure,
    a2: &Structure,
) -> Result<(Structure, impl Fn(u32) -> u32), IndexError> {
    let n1 = a1.structure.n();
    let n2 = a2.n();
    let point = a1.point;
    for decl in vocab.symbols() {
        let r1 = a1.structure.relation(&decl.name);
        let r2 = a2.relation(&decl.name);
        if r1.is_none() || r2.is_none() {
            return Err(IndexError::VocabularyMismatch);
        }
    }
    let n = n1 + n2 - 1;

    // relabeling maps
    let map1 = move |e: u32| -> u32 {
        debug_assert_ne!(e, point);
        if e < point {
            e
        } else {
            e - 1
        }
    };
    let map2 = move |e: u32| -> u32 { (n1 as u32 - 1) + e };

    let mut out = Structure::new(n);
    for decl in vocab.symbols() {
        let r1 = a1.structure.relation(&decl.name).unwrap();
        let r2 = a2.relation(&decl.name).unwrap();
        let mut rel = Relation::empty(decl.arity, n);
        // tuples of A2
        for t in r2.tuples() {
            let mapped: Vec<u32> = t.iter().map(|&e| map2(e)).collect();
            rel.insert(&mapped);
        }
        // tuples of A1: survivors directly, occurrences of the point
        // replaced independently by every element of A2
        for t in r1.tuples() {
            let occurrences: Vec<usize> = t
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e == point)
                .map(|(i, _)| i)
                .collect();
            if occurrences.is_empty() {
                let mapped: Vec<u32> = t.iter().map(|&e| map1(e)).collect();
                rel.insert(&mapped);
                continue;
            }
            let choices = (n2 as u64).pow(occurrences.len() as u32);
            for code in 0..choices {
                let mut mapped: Vec<u32> = t
                    .iter()
                    .map(|&e| if e == point { 0 } else { map1(e) })
                    .collect();
                let mut rest = code;
                for &pos in &occurrences {
                    let pick = (rest % n2 as u64) as u32 + 1;
                    rest /= n2 as u64;
                    mapped[pos] = map2(pick);
                }
                rel.insert(&mapped);
            }
        }
        out.set_relation(&decl.name, rel);
    }
    Ok((out, map2))
}

/// A membership oracle for a class of structures over a fixed vocabulary.
pub trait ClassOracle {
    fn vocabulary(&self) -> &Vocabulary;
    fn contains(&self, structure: &Structure) -> bool;
}

/// Class defined by an unordered sentence.
pub struct FormulaClass {
    vocab: Vocabulary,
    phi: Formula,
}

impl FormulaClass {
    pub fn new(vocab: Vocabulary, phi: Formula) -> Result<Self, IndexError> {
        phi.well_formed(&vocab, &[])?;
        Ok(FormulaClass { vocab, phi })
    }
}

impl ClassOracle for FormulaClass {
    fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }
    fn contains(&self, structure: &Structure) -> bool {
        evaluate(&self.phi, &self.vocab, structure, &Env::default()).unwrap_or(false)
    }
}

/// Class of structures with an even universe, over any vocabulary.
pub struct EvenSizeClass {
    vocab: Vocabulary,
}

impl EvenSizeClass {
    pub fn new(vocab: Vocabulary) -> Self {
        EvenSizeClass { vocab }
    }
}

impl ClassOracle for EvenSizeClass {
    fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }
    fn contains(&self, structure: &Structure) -> bool {
        structure.n().is_multiple_of(2)
    }
}

/// Search configuration for distinguishing-context searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    /// contexts are enumerated with universes up to this size
    pub bound: usize,
    /// hard cap on the number of contexts visited
    pub cap: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            bound: 3,
            cap: 1_000_000,
        }
    }
}

/// Enumerate pointed contexts by universe size, then lexicographic relation
/// masks, then point, applying `f` until it returns `Some` or the cap is
/// hit. Returns the first hit in enumeration order.
fn search_contexts<T: Send>(
    vocab: &Vocabulary,
    limits: SearchLimits,
    f: impl Fn(&PointedStructure) -> Option<T> + Sync,
) -> Result<Option<T>, IndexError> {
    let mut visited = 0u64;
    for k in 1..=limits.bound {
        let decls: Vec<(usize, u64)> = vocab
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, d)| (i, (k as u64).pow(d.arity as u32)))
            .collect();
        let total_bits: u64 = decls.iter().map(|&(_, b)| b).sum();
        if total_bits > 40 {
            return Err(IndexError::CapExceeded { cap: limits.cap });
        }
        let combos: u64 = 1 << total_bits;
        let slots: u64 = combos * k as u64;
        if visited.saturating_add(slots) > limits.cap {
            return Err(IndexError::CapExceeded { cap: limits.cap });
        }
        let decode = |idx: u64| -> PointedStructure {
            let code = idx / k as u64;
            let point = (idx % k as u64) as u32 + 1;
            let mut s = Structure::empty_for(vocab, k);
            let mut rest = code;
            for &(sym_idx, bits) in &decls {
                let mask = rest & ((1u64 << bits) - 1);
                rest >>= bits;
                let name = &vocab.symbols()[sym_idx].name;
                s.relation_mut(name).unwrap().set_mask(mask);
            }
            PointedStructure {
                structure: s,
                point,
            }
        };

        // enumeration index: masks outer, point inner
        let hit = run_search(slots, &decode, &f);
        visited += slots;
        if let Some(found) = hit {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

#[cfg(feature = "parallel")]
fn run_search<T: Send>(
    slots: u64,
    decode: &(impl Fn(u64) -> PointedStructure + Sync),
    f: &(impl Fn(&PointedStructure) -> Option<T> + Sync),
) -> Option<T> {
    use rayon::prelude::*;
    (0..slots)
        .into_par_iter()
        .find_map_first(|idx| f(&decode(idx)))
}

#[cfg(not(feature = "parallel"))]
fn run_search<T: Send>(
    slots: u64,
    decode: &impl Fn(u64) -> PointedStructure,
    f: &impl Fn(&PointedStructure) -> Option<T>,
) -> Option<T> {
    (0..slots).find_map(|idx| f(&decode(idx)))
}

/// Search for a pointed context separating `a1` from `a2` with respect to
/// class membership. Returns the first separating context in enumeration
/// order, or `None` when no context within the bound separates them.
pub fn distinguish<C: ClassOracle + Sync>(
    class: &C,
    a1: &Structure,
    a2: &Structure,
    limits: SearchLimits,
) -> Result<Option<PointedStructure>, IndexError> {
    let vocab = class.vocabulary();
    search_contexts(vocab, limits, |context| {
        let s1 = match subst(vocab, context, a1) {
            Ok(s) => s,
            Err(_) => return None,
        };
        let s2 = match subst(vocab, context, a2) {
            Ok(s) => s,
            Err(_) => return None,
        };
        if class.contains(&s1) != class.contains(&s2) {
            Some(context.clone())
        } else {
            None
        }
    })
}

/// Enumerate all structures with universes up to `size` and greedily collect
/// pairwise-distinguished representatives; the count is a certified lower
/// bound on the number of substitution-equivalence classes.
pub fn index_lower_bound<C: ClassOracle + Sync>(
    class: &C,
    size: usize,
    limits: SearchLimits,
) -> Result<usize, IndexError> {
    let vocab = class.vocabulary();
    let mut representatives: Vec<Structure> = Vec::new();
    for k in 1..=size {
        let decls: Vec<(usize, u64)> = vocab
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, d)| (i, (k as u64).pow(d.arity as u32)))
            .collect();
        let total_bits: u64 = decls.iter().map(|&(_, b)| b).sum();
        if total_bits > 30 {
            return Err(IndexError::CapExceeded { cap: limits.cap });
        }
        for code in 0..(1u64 << total_bits) {
            let mut s = Structure::empty_for(vocab, k);
            let mut rest = code;
            for &(sym_idx, bits) in &decls {
                let mask = rest & ((1u64 << bits) - 1);
                rest >>= bits;
                let name = &vocab.symbols()[sym_idx].name;
                s.relation_mut(name).unwrap().set_mask(mask);
            }
            let mut distinguished_from_all = true;
            for rep in &representatives {
                if distinguish(class, rep, &s, limits)?.is_none() {
                    distinguished_from_all = false;
                    break;
                }
            }
            if distinguished_from_all {
                representatives.push(s);
            }
        }
    }
    Ok(representatives.len())
}

/// Brute-force isomorphism check for structures up to a handful of
/// elements (used by tests as an independent oracle).
pub fn isomorphic(vocab: &Vocabulary, a: &Structure, b: &Structure) -> bool {
    if a.n() != b.n() {
        return false;
    }
    let n = a.n();
    let perms = crate::util::permutations(n);
    'outer: for perm in &perms {
        for decl in vocab.symbols() {
            let ra = match a.relation(&decl.name) {
                Some(r) => r,
                None => return false,
            };
            let rb = match b.relation(&decl.name) {
                Some(r) => r,
                None => return false,
            };
            if ra.count_tuples() != rb.count_tuples() {
                continue 'outer;
            }
            for t in ra.tuples() {
                let mapped: Vec<u32> = t.iter().map(|&e| perm[e as usize - 1]).collect();
                if !rb.contains(&mapped) {
                    continue 'outer;
                }
            }
        }
        return true;
    }
    n == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;

    fn binary_vocab() -> Vocabulary {
        Vocabulary::from_triples(&[("E", 2, true)])
    }

    fn structure(n: usize, edges: &[(u32, u32)]) -> Structure {
        let mut s = Structure::empty_for(&binary_vocab(), n);
        for &(a, b) in edges {
            s.relation_mut("E").unwrap().insert(&[a, b]);
        }
        s
    }

    #[test]
    fn empty_context_acts_as_identity() {
        let v = binary_vocab();
        let ctx = PointedStructure::new(structure(1, &[]), 1).unwrap();
        let a2 = structure(3, &[(1, 2), (3, 3)]);
        let out = subst(&v, &ctx, &a2).unwrap();
        assert_eq!(out.n(), 3);
        assert!(isomorphic(&v, &out, &a2));
    }

    #[test]
    fn worked_three_element_example() {
        // A1 = <[2], E = {(1,2)}, point 1>, A2 = <[2], E = {}>:
        // surviving element 2 becomes 1, A2's elements become 2 and 3,
        // and the tuple through the point expands to (2,1) and (3,1)
        let v = binary_vocab();
        let a1 = PointedStructure::new(structure(2, &[(1, 2)]), 1).unwrap();
        let a2 = structure(2, &[]);
        let out = subst(&v, &a1, &a2).unwrap();
        assert_eq!(out.n(), 3);
        assert_eq!(
            out.relation("E").unwrap().tuples(),
            vec![vec![2, 1], vec![3, 1]]
        );
    }

    #[test]
    fn loop_at_point_expands_to_full_square() {
        let v = binary_vocab();
        let a1 = PointedStructure::new(structure(1, &[(1, 1)]), 1).unwrap();
        let a2 = structure(2, &[]);
        let out = subst(&v, &a1, &a2).unwrap();
        assert_eq!(out.n(), 2);
        assert_eq!(out.relation("E").unwrap().count_tuples(), 4);
    }

    #[test]
    fn size_arithmetic_holds_on_random_instances() {
        let v = binary_vocab();
        let mut rng = SplitMix64::new(404);
        for _ in 0..200 {
            let n1 = 1 + rng.below(4) as usize;
            let n2 = 1 + rng.below(4) as usize;
            let mut s1 = Structure::empty_for(&v, n1);
            s1.relation_mut("E")
                .unwrap()
                .set_mask(rng.next_u64() & ((1 << (n1 * n1)) - 1));
            let point = 1 + rng.below(n1 as u64) as u32;
            let a1 = PointedStructure::new(s1, point).unwrap();
            let mut a2 = Structure::empty_for(&v, n2);
            a2.relation_mut("E")
                .unwrap()
                .set_mask(rng.next_u64() & ((1 << (n2 * n2)) - 1));
            let out = subst(&v, &a1, &a2).unwrap();
            assert_eq!(out.n(), n1 + n2 - 1);
        }
    }

    #[test]
    fn substitution_respects_isomorphism() {
        let v = binary_vocab();
        let mut rng = SplitMix64::new(777);
        for _ in 0..50 {
            let n1 = 1 + rng.below(3) as usize;
            let n2 = 1 + rng.below(4) as usize;
            let mut s1 = Structure::empty_for(&v, n1);
            s1.relation_mut("E")
                .unwrap()
                .set_mask(rng.next_u64() & ((1 << (n1 * n1)) - 1));
            let point = 1 + rng.below(n1 as u64) as u32;
            let ctx = PointedStructure::new(s1, point).unwrap();

            let mut a = Structure::empty_for(&v, n2);
            a.relation_mut("E")
                .unwrap()
                .set_mask(rng.next_u64() & ((1 << (n2 * n2)) - 1));
            // relabel a by a random permutation
            let mut perm: Vec<u32> = (1..=n2 as u32).collect();
            rng.shuffle(&mut perm);
            let mut b = Structure::empty_for(&v, n2);
            for t in a.relation("E").unwrap().tuples() {
                let mapped: Vec<u32> = t.iter().map(|&e| perm[e as usize - 1]).collect();
                b.relation_mut("E").unwrap().insert(&mapped);
            }
            assert!(isomorphic(&v, &a, &b));
            let sa = subst(&v, &ctx, &a).unwrap();
            let sb = subst(&v, &ctx, &b).unwrap();
            assert!(isomorphic(&v, &sa, &sb));
        }
    }

    #[test]
    fn equivalence_class_distinguishes_reflexive_from_irreflexive_point() {
        let (v, phi) = crate::catalog::formulas::equivalence_relations();
        let class = FormulaClass::new(v, phi).unwrap();
        let a1 = structure(1, &[(1, 1)]);
        let a2 = structure(1, &[]);
        let ctx = distinguish(&class, &a1, &a2, SearchLimits::default())
            .unwrap()
            .expect("distinguishable");
        assert_eq!(ctx.structure.n(), 1);
    }

    #[test]
    fn isomorphic_structures_are_indistinguishable() {
        let (v, phi) = crate::catalog::formulas::equivalence_relations();
        let class = FormulaClass::new(v.clone(), phi).unwrap();
        let a = structure(2, &[(1, 1), (2, 2), (1, 2), (2, 1)]);
        let b = structure(2, &[(2, 2), (1, 1), (2, 1), (1, 2)]);
        let found = distinguish(&class, &a, &b, SearchLimits::default()).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn even_size_class_distinguishes_parity() {
        let v = binary_vocab();
        let class = EvenSizeClass::new(v);
        let a1 = structure(1, &[]);
        let a2 = structure(2, &[]);
        let ctx = distinguish(&class, &a1, &a2, SearchLimits::default())
            .unwrap()
            .expect("sizes differ mod 2");
        assert_eq!(ctx.structure.n(), 1);
    }

    #[test]
    fn trivial_class_has_lower_bound_one() {
        let v = binary_vocab();
        let class = FormulaClass::new(v, Formula::True).unwrap();
        let bound = index_lower_bound(&class, 2, SearchLimits::default()).unwrap();
        assert_eq!(bound, 1);
    }

    #[test]
    fn equivalence_relations_have_at_least_two_classes() {
        let (v, phi) = crate::catalog::formulas::equivalence_relations();
        let class = FormulaClass::new(v, phi).unwrap();
        let bound = index_lower_bound(&class, 2, SearchLimits::default()).unwrap();
        assert!(bound >= 2, "got {bound}");
    }

    #[test]
    fn even_size_class_has_exactly_two_within_search() {
        let v = Vocabulary::from_triples(&[("P", 1, true)]);
        let class = EvenSizeClass::new(v);
        for size in [2usize, 3, 4] {
            let bound = index_lower_bound(&class, size, SearchLimits::default()).unwrap();
            assert_eq!(bound, 2, "size={size}");
        }
    }

    #[test]
    fn equivalence_lower_bound_stabilizes_over_growing_search() {
        // finite-index consistency: the greedy bound stops growing as the
        // structure size and context bound increase over the tested range
        let (v, phi) = crate::catalog::formulas::equivalence_relations();
        let class = FormulaClass::new(v, phi).unwrap();
        let at = |size: usize, bound: usize| {
            index_lower_bound(
                &class,
                size,
                SearchLimits {
                    bound,
                    cap: 1_000_000,
                },
            )
            .unwrap()
        };
        let small = at(2, 2);
        let grown = at(3, 2);
        assert_eq!(small, 3);
        assert_eq!(grown, small);
    }

    #[test]
    fn cap_exceeded_is_reported() {
        let v = binary_vocab();
        let class = EvenSizeClass::new(v);
        let a1 = structure(1, &[]);
        let a2 = structure(1, &[(1, 1)]);
        let limits = SearchLimits { bound: 3, cap: 4 };
        assert!(matches!(
            distinguish(&class, &a1, &a2, limits),
            Err(IndexError::CapExceeded { cap: 4 })
        ));
    }
}
