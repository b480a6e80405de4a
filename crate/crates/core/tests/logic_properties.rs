//! Semantic laws of the evaluator: De Morgan and quantifier dualities
//! checked exhaustively on small structures, and the modular quantifier
//! pinned against a direct witness count.

use specker_core::logic::{evaluate, Env, Formula, Structure, Vocabulary};
use specker_core::util::SplitMix64;

fn unary_vocab() -> Vocabulary {
    Vocabulary::from_triples(&[("P", 1, true)])
}

/// All structures over one unary symbol with universe size `n`.
fn all_structures(vocab: &Vocabulary, n: usize) -> Vec<Structure> {
    let mut out = Vec::new();
    for mask in 0..(1u64 << n) {
        let mut s = Structure::empty_for(vocab, n);
        s.relation_mut("P").unwrap().set_mask(mask);
        out.push(s);
    }
    out
}

fn eval(phi: &Formula, vocab: &Vocabulary, s: &Structure) -> bool {
    evaluate(phi, vocab, s, &Env::default()).unwrap()
}

#[test]
fn de_morgan_exhaustive() {
    let vocab = unary_vocab();
    let f = Formula::forall("x", Formula::rel("P", &["x"]));
    let g = Formula::exists("x", Formula::not(Formula::rel("P", &["x"])));
    let lhs = Formula::not(Formula::and(f.clone(), g.clone()));
    let rhs = Formula::or(Formula::not(f), Formula::not(g));
    for n in 0..=4usize {
        for s in all_structures(&vocab, n) {
            assert_eq!(eval(&lhs, &vocab, &s), eval(&rhs, &vocab, &s));
        }
    }
}

#[test]
fn quantifier_duality_exhaustive() {
    let vocab = unary_vocab();
    let body = Formula::rel("P", &["x"]);
    let forall = Formula::forall("x", body.clone());
    let via_exists = Formula::not(Formula::exists("x", Formula::not(body)));
    let set_body = Formula::exists(
        "x",
        Formula::and(Formula::member("x", "U"), Formula::rel("P", &["x"])),
    );
    let forall_set = Formula::forall_set("U", set_body.clone());
    let via_exists_set = Formula::not(Formula::exists_set("U", Formula::not(set_body)));
    for n in 0..=3usize {
        for s in all_structures(&vocab, n) {
            assert_eq!(eval(&forall, &vocab, &s), eval(&via_exists, &vocab, &s));
            assert_eq!(
                eval(&forall_set, &vocab, &s),
                eval(&via_exists_set, &vocab, &s)
            );
        }
    }
}

#[test]
fn cmod_agrees_with_direct_counting() {
    let vocab = Vocabulary::from_triples(&[("P", 1, true), ("Q", 1, true)]);
    let mut rng = SplitMix64::new(64);
    // random bodies: boolean combinations of the two memberships
    for _ in 0..200 {
        let n = (rng.below(5) + 1) as usize;
        let body = match rng.below(4) {
            0 => Formula::rel("P", &["x"]),
            1 => Formula::and(Formula::rel("P", &["x"]), Formula::rel("Q", &["x"])),
            2 => Formula::or(Formula::rel("P", &["x"]), Formula::not(Formula::rel("Q", &["x"]))),
            _ => Formula::implies(Formula::rel("Q", &["x"]), Formula::rel("P", &["x"])),
        };
        let b = 2 + rng.below(3) as u32;
        let a = rng.below(b as u64) as u32;
        let phi = Formula::cmod(a, b, "x", body.clone());
        let mut s = Structure::empty_for(&vocab, n);
        s.relation_mut("P").unwrap().set_mask(rng.below(1 << n));
        s.relation_mut("Q").unwrap().set_mask(rng.below(1 << n));
        let holds = eval(&phi, &vocab, &s);
        let mut witnesses = 0u32;
        for v in 1..=n as u32 {
            let env = Env::with_individual("x", v);
            if evaluate(&body, &vocab, &s, &env).unwrap() {
                witnesses += 1;
            }
        }
        assert_eq!(holds, witnesses % b == a, "a={a} b={b} n={n}");
    }
}

#[test]
fn parallel_counting_is_worker_independent() {
    use specker_core::catalog::formulas;
    use specker_core::counting::{specker_count, CountTask};
    let (vocab, phi) = formulas::equivalence_relations();
    let mut counts = Vec::new();
    for workers in [1usize, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .unwrap();
        let c = pool.install(|| specker_count(&CountTask::new(&vocab, &phi, 4)).unwrap());
        counts.push(c);
    }
    assert_eq!(counts[0], counts[1]);
    assert_eq!(counts[0], counts[2]);
}
