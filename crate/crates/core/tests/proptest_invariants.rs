//! Randomized structural invariants: the printer/parser round trip on
//! generated sentences, generating-function round trips on random small
//! recurrences, and re-detection stability of the minimal recurrence.

use proptest::prelude::*;
use specker_core::logic::{parse_formula, Formula, Vocabulary};
use specker_core::series::{
    detect_integer_recurrence, generate_terms, gf_from_linrec, gf_to_linrec, LinRec,
};

fn vocab() -> Vocabulary {
    Vocabulary::from_triples(&[("E", 2, true), ("P", 1, true)])
}

/// Sentences over one binary and one unary symbol with bounded depth.
fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        Just(Formula::rel("P", &["x"])),
        Just(Formula::rel("E", &["x", "y"])),
        Just(Formula::eq("x", "y")),
        Just(Formula::lt("x", "y")),
        Just(Formula::member("x", "U")),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(|f| Formula::forall("x", f)),
            inner.clone().prop_map(|f| Formula::exists("y", f)),
            inner.clone().prop_map(|f| Formula::forall_set("U", f)),
            (0u32..2, 2u32..4, inner.clone())
                .prop_map(|(a, b, f)| Formula::cmod(a.min(b - 1), b, "x", f)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(phi in formula_strategy()) {
        // close the sentence: bind the free variables used by the leaves
        let sentence = Formula::forall(
            "x",
            Formula::forall("y", Formula::forall_set("U", phi)),
        );
        let v = vocab();
        prop_assert!(sentence.well_formed(&v, &[]).is_ok());
        let text = sentence.to_sexpr();
        let back = parse_formula(&text, &v).expect("round trip parses");
        prop_assert_eq!(back, sentence);
    }

    #[test]
    fn gf_round_trip_small_recurrences(
        coeffs in proptest::collection::vec(-5i64..=5, 1..=4),
        seed_initials in proptest::collection::vec(-5i64..=5, 4),
    ) {
        prop_assume!(*coeffs.last().unwrap() != 0);
        let d = coeffs.len();
        let initials: Vec<i64> = seed_initials[..d].to_vec();
        let rec = LinRec::from_i64(&coeffs, &initials);
        let gf = gf_from_linrec(&rec).expect("forward");
        let back = gf_to_linrec(&gf).expect("inverse");
        prop_assert_eq!(&back.coeffs, &rec.coeffs);
        prop_assert_eq!(&back.initials, &rec.initials);
        // the expansion reproduces the sequence
        let window = 2 * d + 6;
        prop_assert_eq!(gf.expand(window), generate_terms(&rec, window));
    }

    #[test]
    fn minimal_recurrence_redetection_is_stable(
        coeffs in proptest::collection::vec(-3i64..=3, 1..=3),
        seed_initials in proptest::collection::vec(0i64..=3, 3),
    ) {
        let d = coeffs.len();
        let rec = LinRec::from_i64(&coeffs, &seed_initials[..d]);
        let terms = generate_terms(&rec, 2 * d + 10);
        if let Ok(min1) = detect_integer_recurrence(&terms) {
            let regenerated = generate_terms(&min1, 2 * d + 10);
            prop_assert_eq!(&regenerated, &terms);
            let min2 = detect_integer_recurrence(&regenerated).expect("re-detection");
            prop_assert_eq!(min1.coeffs, min2.coeffs);
            prop_assert_eq!(min1.preperiod, min2.preperiod);
        }
    }
}
