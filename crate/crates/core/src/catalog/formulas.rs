//! Sentence builders for the registered counting families.

use crate::logic::{parse_formula, Formula, Vocabulary};

fn must_parse(text: &str, vocab: &Vocabulary) -> Formula {
    parse_formula(text, vocab).expect("catalog formula parses")
}

/// Linear order axioms over one counted binary symbol `E`.
pub fn linear_orders() -> (Vocabulary, Formula) {
    let v = Vocabulary::from_triples(&[("E", 2, true)]);
    let phi = must_parse(
        "(and (and (forall x (not (rel E x x))) \
                   (forall x (forall y (implies (not (= x y)) \
                       (and (or (rel E x y) (rel E y x)) (not (and (rel E x y) (rel E y x)))))))) \
              (forall x (forall y (forall z (implies (and (rel E x y) (rel E y z)) (rel E x z))))))",
        &v,
    );
    (v, phi)
}

/// Equivalence relation axioms over one counted binary symbol `E`.
pub fn equivalence_relations() -> (Vocabulary, Formula) {
    let v = Vocabulary::from_triples(&[("E", 2, true)]);
    let phi = must_parse(
        "(and (and (forall x (rel E x x)) \
                   (forall x (forall y (implies (rel E x y) (rel E y x))))) \
              (forall x (forall y (forall z (implies (and (rel E x y) (rel E y z)) (rel E x z))))))",
        &v,
    );
    (v, phi)
}

/// Equivalence relations with exactly `r` classes (r = 1, 2 or 3).
pub fn stirling2_unordered(r: usize) -> (Vocabulary, Formula) {
    let v = Vocabulary::from_triples(&[("E", 2, true)]);
    let (_, axioms) = equivalence_relations();
    let classes = match r {
        1 => must_parse("(forall x (forall y (rel E x y)))", &v),
        2 => must_parse(
            "(exists a (exists b (and (not (rel E a b)) \
                 (forall y (or (rel E a y) (rel E b y))))))",
            &v,
        ),
        3 => must_parse(
            "(exists a (exists b (exists c (and (and (and (not (rel E a b)) (not (rel E a c))) (not (rel E b c))) \
                 (forall y (or (or (rel E a y) (rel E b y)) (rel E c y)))))))",
            &v,
        ),
        _ => panic!("stirling2 formulas provided for r <= 3"),
    };
    (v, Formula::and(axioms, classes))
}

/// Ordered unary encoding of partitions into `r` nonempty blocks where block
/// minima increase with the block index; a word-compilable variant.
pub fn stirling2_ordered(r: usize) -> (Vocabulary, Formula) {
    assert!(r >= 1, "need at least one block");
    let names: Vec<String> = (1..=r).map(|i| format!("u{i}")).collect();
    let triples: Vec<(&str, usize, bool)> =
        names.iter().map(|n| (n.as_str(), 1, true)).collect();
    let v = Vocabulary::new(
        triples
            .iter()
            .map(|&(n, a, c)| crate::logic::SymbolDecl {
                name: n.to_string(),
                arity: a,
                counted: c,
            })
            .collect(),
    )
    .unwrap();

    let mut clauses = Vec::new();
    // cover
    clauses.push(Formula::forall(
        "x",
        Formula::disj(names.iter().map(|n| Formula::rel(n, &["x"])).collect()),
    ));
    // pairwise disjoint
    for i in 0..r {
        for j in (i + 1)..r {
            clauses.push(Formula::forall(
                "x",
                Formula::not(Formula::and(
                    Formula::rel(&names[i], &["x"]),
                    Formula::rel(&names[j], &["x"]),
                )),
            ));
        }
    }
    // nonempty
    for name in &names {
        clauses.push(Formula::exists("x", Formula::rel(name, &["x"])));
    }
    // min(U_i) < min(U_j) for i < j: every element of U_j has a smaller U_i element
    for i in 0..r {
        for j in (i + 1)..r {
            clauses.push(Formula::forall(
                "y",
                Formula::implies(
                    Formula::rel(&names[j], &["y"]),
                    Formula::exists(
                        "x",
                        Formula::and(Formula::rel(&names[i], &["x"]), Formula::lt("x", "y")),
                    ),
                ),
            ));
        }
    }
    (v, Formula::conj(clauses))
}

/// Permutations of `[n]` (as functional graphs) with exactly `r` cycles.
pub fn stirling1(r: usize) -> (Vocabulary, Formula) {
    let v = Vocabulary::from_triples(&[("E", 2, true)]);
    // E is a bijective function
    let permutation = must_parse(
        "(and (and (forall x (exists y (rel E x y))) \
                   (forall x (forall y (forall z (implies (and (rel E x y) (rel E x z)) (= y z)))))) \
              (forall x (forall y (forall z (implies (and (rel E x z) (rel E y z)) (= x y))))))",
        &v,
    );
    // reach(a, b): every E-closed set containing a contains b
    let reach = |a: &str, b: &str| -> Formula {
        Formula::forall_set(
            "W",
            Formula::implies(
                Formula::and(
                    Formula::member(a, "W"),
                    Formula::forall(
                        "p",
                        Formula::forall(
                            "q",
                            Formula::implies(
                                Formula::and(Formula::member("p", "W"), Formula::rel("E", &["p", "q"])),
                                Formula::member("q", "W"),
                            ),
                        ),
                    ),
                ),
                Formula::member(b, "W"),
            ),
        )
    };
    let cycles = match r {
        1 => Formula::exists("a", Formula::forall("y", reach("a", "y"))),
        2 => Formula::exists(
            "a",
            Formula::exists(
                "b",
                Formula::and(
                    Formula::not(reach("a", "b")),
                    Formula::forall("y", Formula::or(reach("a", "y"), reach("b", "y"))),
                ),
            ),
        ),
        3 => Formula::exists(
            "a",
            Formula::exists(
                "b",
                Formula::exists(
                    "c",
                    Formula::and(
                        Formula::conj(vec![
                            Formula::not(reach("a", "b")),
                            Formula::not(reach("a", "c")),
                            Formula::not(reach("b", "c")),
                        ]),
                        Formula::forall(
                            "y",
                            Formula::disj(vec![reach("a", "y"), reach("b", "y"), reach("c", "y")]),
                        ),
                    ),
                ),
            ),
        ),
        _ => panic!("stirling1 formulas provided for r <= 3"),
    };
    (v, Formula::and(permutation, cycles))
}

/// The two-equal-classes construction: `F` is the unique monotone bijection
/// from `U` onto its complement `R`, with the first element in `U`.
pub fn e2eq_formula() -> (Vocabulary, Formula) {
    let v = Vocabulary::from_triples(&[("U", 1, true), ("R", 1, true), ("F", 2, true)]);
    let clauses = [
        // U and R partition [n]
        "(forall x (or (rel U x) (rel R x)))",
        "(forall x (not (and (rel U x) (rel R x))))",
        // the <-first element lies in U
        "(forall x (implies (not (exists y (< y x))) (rel U x)))",
        // F is functional
        "(forall x (forall y (forall z (implies (and (rel F x y) (rel F x z)) (= y z)))))",
        // U is the domain of F
        "(forall x (implies (rel U x) (exists y (rel F x y))))",
        "(forall x (forall y (implies (rel F x y) (rel U x))))",
        // R is the range of F
        "(forall y (implies (rel R y) (exists x (rel F x y))))",
        "(forall x (forall y (implies (rel F x y) (rel R y))))",
        // injective
        "(forall x (forall y (forall z (implies (and (rel F x z) (rel F y z)) (= x y)))))",
        // monotone with respect to <
        "(forall x (forall y (forall u (forall w (implies \
            (and (and (rel F x u) (rel F y w)) (< x y)) (< u w))))))",
    ];
    let phi = Formula::conj(
        clauses
            .iter()
            .map(|c| must_parse(c, &v))
            .collect::<Vec<_>>(),
    );
    (v, phi)
}

/// Labeled trees: symmetric irreflexive, connected, acyclic.
pub fn trees() -> (Vocabulary, Formula) {
    let v = Vocabulary::from_triples(&[("E", 2, true)]);
    let basic = must_parse(
        "(and (forall x (not (rel E x x))) \
              (forall x (forall y (implies (rel E x y) (rel E y x)))))",
        &v,
    );
    let connected = must_parse(
        "(forall-set W (implies (and (exists x (in x W)) \
              (forall x (forall y (implies (and (in x W) (rel E x y)) (in y W))))) \
              (forall x (in x W))))",
        &v,
    );
    // every nonempty set has a vertex with at most one neighbour inside it
    let acyclic = must_parse(
        "(forall-set W (implies (exists x (in x W)) \
              (exists x (and (in x W) \
                  (forall y (forall z (implies \
                      (and (and (and (in y W) (in z W)) (and (rel E x y) (rel E x z))) (not (= y z))) \
                      false)))))))",
        &v,
    );
    (v, Formula::and(Formula::and(basic, connected), acyclic))
}

/// Eulerian graphs: symmetric irreflexive, connected, all degrees even.
pub fn eulerian_graphs() -> (Vocabulary, Formula) {
    let v = Vocabulary::from_triples(&[("E", 2, true)]);
    let basic = must_parse(
        "(and (forall x (not (rel E x x))) \
              (forall x (forall y (implies (rel E x y) (rel E y x)))))",
        &v,
    );
    let connected = must_parse(
        "(forall-set W (implies (and (exists x (in x W)) \
              (forall x (forall y (implies (and (in x W) (rel E x y)) (in y W))))) \
              (forall x (in x W))))",
        &v,
    );
    let even_degrees = must_parse("(forall x (cmod 0 2 y (rel E x y)))", &v);
    (v, Formula::and(Formula::and(basic, connected), even_degrees))
}

/// Height-profile encoding of balanced parenthesis arrangements: two partial
/// functions carry the profile's first and second half; a position where the
/// function is undefined encodes height zero, and the value `k` is encoded by
/// the element of rank `k`.
pub fn catalan() -> (Vocabulary, Formula) {
    let v = Vocabulary::from_triples(&[("F1", 2, true), ("F2", 2, true)]);
    let minimum = |var: &str| format!("(not (exists q (< q {var})))");
    let maximum = |var: &str| format!("(not (exists q (< {var} q)))");
    // succ_val(u, w): w is the <-successor of u
    let succ = |u: &str, w: &str| format!("(and (< {u} {w}) (not (exists m (and (< {u} m) (< m {w})))))");

    let mut clauses: Vec<String> = Vec::new();
    for f in ["F1", "F2"] {
        // functional
        clauses.push(format!(
            "(forall x (forall y (forall z (implies (and (rel {f} x y) (rel {f} x z)) (= y z)))))"
        ));
    }
    // first value is 1: F1 at the minimum position takes the minimum value
    clauses.push(format!(
        "(forall x (implies {} (exists v (and (rel F1 x v) {}))))",
        minimum("x"),
        minimum("v")
    ));
    // last value is 0: F2 undefined at the maximum position
    clauses.push(format!(
        "(forall x (implies {} (not (exists v (rel F2 x v)))))",
        maximum("x")
    ));
    // steps of +-1 between consecutive positions, within each half
    for f in ["F1", "F2"] {
        clauses.push(step_clause(f, f, &succ));
    }
    // boundary step between F1 at the maximum position and F2 at the minimum
    clauses.push(format!(
        "(forall x (forall y (implies (and {} {}) {})))",
        maximum("x"),
        minimum("y"),
        step_condition("F1", "x", "F2", "y", &succ)
    ));
    let texts: Vec<Formula> = clauses.iter().map(|c| must_parse(c, &v)).collect();
    (v, Formula::conj(texts))
}

/// Step condition between consecutive positions within one function's half.
fn step_clause(f: &str, g: &str, succ: &dyn Fn(&str, &str) -> String) -> String {
    // for all positions x with successor y: |val(x) - val(y)| = 1,
    // where an undefined value reads as 0 and value comparisons go through ranks
    format!(
        "(forall x (forall y (implies {} {})))",
        succ("x", "y"),
        step_condition(f, "x", g, "y", succ)
    )
}

/// |val_f(x) - val_g(y)| = 1 with "undefined = 0" and "value k = rank-k element".
fn step_condition(
    f: &str,
    x: &str,
    g: &str,
    y: &str,
    succ: &dyn Fn(&str, &str) -> String,
) -> String {
    let min_v = "(not (exists q (< q v)))";
    let min_w = "(not (exists q (< q w)))";
    format!(
        "(or (or \
           (and (not (exists v (rel {f} {x} v))) (exists w (and (rel {g} {y} w) {min_w}))) \
           (and (not (exists w (rel {g} {y} w))) (exists v (and (rel {f} {x} v) {min_v})))) \
           (exists v (exists w (and (and (rel {f} {x} v) (rel {g} {y} w)) (or {sv} {sw})))))",
        sv = succ("v", "w"),
        sw = succ("w", "v"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{classify_fragment, Fragment};

    #[test]
    fn formulas_are_well_formed() {
        for (v, phi) in [
            linear_orders(),
            equivalence_relations(),
            stirling2_unordered(2),
            stirling2_ordered(2),
            stirling1(1),
            e2eq_formula(),
            trees(),
            eulerian_graphs(),
            catalan(),
        ] {
            phi.well_formed(&v, &[]).unwrap();
        }
    }

    #[test]
    fn eulerian_is_cmsol_unordered_arity2() {
        let (v, phi) = eulerian_graphs();
        let tag = classify_fragment(&phi, &v);
        assert_eq!(tag.fragment, Fragment::Cmsol);
        assert!(!tag.ordered);
        assert_eq!(tag.max_arity, 2);
    }

    #[test]
    fn e2eq_is_ordered_fol_arity2() {
        let (v, phi) = e2eq_formula();
        let tag = classify_fragment(&phi, &v);
        assert_eq!(tag.fragment, Fragment::Fol);
        assert!(tag.ordered);
        assert_eq!(tag.max_arity, 2);
    }
}
