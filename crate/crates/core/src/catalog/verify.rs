//! Per-entry verification: compare the independent oracle against the
//! brute-force counting lane and the word-compiler lane where they apply,
//! then check every recorded fact. Each lane reports pass/fail with the
//! first mismatch.

use super::entries::{chebyshev_rec, get_entry, CatalogEntry, CatalogError, EntryKind, Fact, Oracle};
use super::oracles;
use crate::construct::{
    encode_recurrence_paths, eval_diff_with, eval_specker_polynomial, recurrence_to_diff_representation,
    Factor, GuardClause, PositionPred, SpeckerPolynomial,
};
use crate::counting::{specker_count, CountTask};
use crate::logic::{Formula, Vocabulary};
use crate::series::{
    detect_integer_recurrence, detect_periodicity_mod, eval_linrec, generate_terms, LinRecOf,
    MultiPoly, PeriodicityVerdict, SeriesError,
};
use crate::words::{compile_word_formula, count_words, recurrence_from_dfa};
use num_bigint::BigInt;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct LaneReport {
    pub lane: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub entry: String,
    pub max_n: usize,
    pub lanes: Vec<LaneReport>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.lanes.iter().all(|l| l.pass)
    }
}

fn lane_ok(lane: &str, detail: impl Into<String>) -> LaneReport {
    LaneReport {
        lane: lane.into(),
        pass: true,
        detail: detail.into(),
    }
}

fn lane_fail(lane: &str, detail: impl Into<String>) -> LaneReport {
    LaneReport {
        lane: lane.into(),
        pass: false,
        detail: detail.into(),
    }
}

/// Run every applicable lane for the entry up to `max_n`.
pub fn verify_entry(name: &str, max_n: usize) -> Result<VerifyReport, CatalogError> {
    let entry = get_entry(name)?;
    let mut lanes = Vec::new();

    if let Some((vocab, phi)) = &entry.formula {
        lanes.push(brute_lane(&entry, vocab, phi, max_n));
    }
    if matches!(entry.kind, EntryKind::Polynomial) && entry.name == "touchard" {
        lanes.push(touchard_brute_lane(&entry, max_n));
    }
    if let Some((vocab, phi)) = &entry.word_formula {
        lanes.push(word_dp_lane(&entry, vocab, phi, max_n));
    }
    for fact in &entry.facts {
        lanes.push(check_fact(&entry, fact));
    }
    Ok(VerifyReport {
        entry: entry.name.clone(),
        max_n,
        lanes,
    })
}

fn brute_lane(entry: &CatalogEntry, vocab: &Vocabulary, phi: &Formula, max_n: usize) -> LaneReport {
    let hi = max_n.min(entry.brute_max_n);
    let lane = "oracle-vs-brute";
    for n in entry.base..=hi {
        let task = CountTask::new(vocab, phi, n);
        let task = if entry.ordered {
            task.ordered_natural()
        } else {
            task
        };
        let counted = match specker_count(&task) {
            Ok(c) => c,
            Err(e) => return lane_fail(lane, format!("counting failed at n={n}: {e}")),
        };
        let expected = entry.oracle.value(n);
        if counted != expected {
            return lane_fail(
                lane,
                format!("first mismatch at n={n}: counted {counted}, oracle {expected}"),
            );
        }
    }
    lane_ok(lane, format!("agree on n={}..={hi}", entry.base))
}

fn word_dp_lane(entry: &CatalogEntry, vocab: &Vocabulary, phi: &Formula, max_n: usize) -> LaneReport {
    let lane = "oracle-vs-word-dp";
    let hi = max_n.min(20);
    let dfa = match compile_word_formula(phi, vocab) {
        Ok(d) => d,
        Err(e) => return lane_fail(lane, format!("compilation failed: {e}")),
    };
    for n in entry.base..=hi {
        let counted = count_words(&dfa, n);
        let expected = entry.oracle.value(n);
        if counted != expected {
            return lane_fail(
                lane,
                format!("first mismatch at n={n}: word-DP {counted}, oracle {expected}"),
            );
        }
    }
    lane_ok(
        lane,
        format!("{} states, agree on n={}..={hi}", dfa.num_states(), entry.base),
    )
}

/// The clique-weighted polynomial evaluated by brute enumeration against the
/// Stirling-sum oracle at small integer points.
fn touchard_brute_lane(entry: &CatalogEntry, max_n: usize) -> LaneReport {
    let lane = "polynomial-vs-oracle";
    let sp = touchard_polynomial();
    let hi = max_n.min(entry.brute_max_n);
    for n in 0..=hi {
        for x in 1i64..=3 {
            let xv = BigInt::from(x);
            let brute = match eval_specker_polynomial(&sp, n, std::slice::from_ref(&xv)) {
                Ok(v) => v,
                Err(e) => return lane_fail(lane, format!("evaluation failed at n={n}: {e}")),
            };
            let expected = oracles::touchard_eval(n, &xv);
            if brute != expected {
                return lane_fail(
                    lane,
                    format!("first mismatch at n={n}, x={x}: {brute} vs {expected}"),
                );
            }
        }
    }
    lane_ok(lane, format!("agree on n=0..={hi}, x=1..=3"))
}

/// The Touchard family as a Specker polynomial: sum over disjoint unions of
/// cliques of x to the number of component minima.
pub fn touchard_polynomial() -> SpeckerPolynomial {
    let vocab = Vocabulary::from_triples(&[("E", 2, true)]);
    let cliques = crate::logic::parse_formula(
        "(and (and (forall x (not (rel E x x))) \
                   (forall x (forall y (implies (rel E x y) (rel E y x))))) \
              (forall x (forall y (forall z (implies \
                  (and (and (rel E x y) (rel E y z)) (not (= x z))) (rel E x z))))))",
        &vocab,
    )
    .expect("clique axioms parse");
    let first_in_component = Formula::forall(
        "w",
        Formula::implies(
            Formula::and(Formula::lt("w", "u"), Formula::not(Formula::eq("w", "u"))),
            Formula::not(Formula::rel("E", &["w", "u"])),
        ),
    );
    SpeckerPolynomial {
        vocab,
        ordered: true,
        guard: vec![GuardClause::Formula(cliques)],
        factors: vec![Factor {
            position: PositionPred::Formula {
                var: "u".into(),
                body: first_in_component,
            },
            monomial: MultiPoly::var(1, 0),
        }],
        nvars: 1,
    }
}

fn check_fact(entry: &CatalogEntry, fact: &Fact) -> LaneReport {
    match fact {
        Fact::PeriodicMod { m, horizon, expect } => {
            let lane = format!("periodicity mod {m}");
            let residues = entry.oracle.residues(entry.base, *m, horizon + 1);
            let report = detect_periodicity_mod(&residues, *m, *horizon);
            match (report.period(), expect) {
                (Some((n0, p)), Some((en0, ep))) if (n0, p) == (*en0, *ep) => {
                    lane_ok(&lane, format!("preperiod {n0}, period {p}"))
                }
                (Some((n0, p)), Some((en0, ep))) => lane_fail(
                    &lane,
                    format!("found ({n0},{p}), expected ({en0},{ep})"),
                ),
                (Some((n0, p)), None) => lane_ok(&lane, format!("preperiod {n0}, period {p}")),
                (None, _) => lane_fail(&lane, format!("no period within horizon {horizon}")),
            }
        }
        Fact::NoPeriodMod { m, horizon } => {
            let lane = format!("anti-periodicity mod {m}");
            let residues = entry.oracle.residues(entry.base, *m, horizon + 1);
            let report = detect_periodicity_mod(&residues, *m, *horizon);
            match report.verdict {
                PeriodicityVerdict::NoPeriodFound { .. } => {
                    lane_ok(&lane, format!("no period within horizon {horizon}"))
                }
                PeriodicityVerdict::PeriodicWithinHorizon { preperiod, period } => lane_fail(
                    &lane,
                    format!("unexpected period ({preperiod},{period})"),
                ),
            }
        }
        Fact::MinimalRecurrence { coeffs, preperiod } => {
            let lane = "minimal recurrence";
            let want: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
            let len = 2 * (coeffs.len() + preperiod) + 8;
            let prefix: Vec<BigInt> = (entry.base..entry.base + len)
                .map(|n| BigInt::from(entry.oracle.value(n)))
                .collect();
            match detect_integer_recurrence(&prefix) {
                Ok(rec) if rec.coeffs == want && rec.preperiod == *preperiod => lane_ok(
                    lane,
                    format!("order {} preperiod {}", rec.order(), rec.preperiod),
                ),
                Ok(rec) => lane_fail(
                    lane,
                    format!(
                        "detected coeffs {:?} preperiod {}, expected {:?} preperiod {}",
                        rec.coeffs, rec.preperiod, want, preperiod
                    ),
                ),
                Err(e) => lane_fail(lane, format!("detection failed: {e}")),
            }
        }
        Fact::NoIntegerRecurrence { prefix_len } => {
            let lane = "no short integer recurrence";
            let long: Vec<BigInt> = (entry.base..entry.base + 2 * prefix_len)
                .map(|n| BigInt::from(entry.oracle.value(n)))
                .collect();
            match detect_integer_recurrence(&long[..*prefix_len]) {
                Err(SeriesError::NonIntegralRecurrence { order }) => {
                    lane_ok(lane, format!("minimal recurrence of order {order} is non-integral"))
                }
                Err(SeriesError::PrefixTooShort { unstable_order }) => {
                    lane_ok(lane, format!("order {unstable_order} did not stabilize"))
                }
                Err(e) => lane_fail(lane, format!("unexpected detection error: {e}")),
                Ok(rec) => {
                    // a candidate stabilized on the short prefix; it must
                    // break on the longer window
                    let regen = generate_terms(&rec, long.len());
                    if regen == long {
                        lane_fail(
                            lane,
                            format!("order-{} recurrence persists on doubled prefix", rec.order()),
                        )
                    } else {
                        lane_ok(
                            lane,
                            format!("candidate order {} breaks on doubled prefix", rec.order()),
                        )
                    }
                }
            }
        }
        Fact::DiscoveredRecurrenceReproduces { to_n } => {
            let lane = "discovered recurrence";
            let Some((vocab, phi)) = &entry.word_formula else {
                return lane_fail(lane, "entry has no word formula");
            };
            let dfa = match compile_word_formula(phi, vocab) {
                Ok(d) => d,
                Err(e) => return lane_fail(lane, format!("compilation failed: {e}")),
            };
            let rec = match recurrence_from_dfa(&dfa) {
                Ok(r) => r,
                Err(e) => return lane_fail(lane, format!("extraction failed: {e}")),
            };
            let terms = generate_terms(&rec, to_n + 1);
            for (n, t) in terms.iter().enumerate() {
                let expected = BigInt::from(entry.oracle.value(n));
                if *t != expected {
                    return lane_fail(lane, format!("first mismatch at n={n}"));
                }
            }
            lane_ok(
                lane,
                format!(
                    "order {} preperiod {} reproduces values to n={to_n}",
                    rec.order(),
                    rec.preperiod
                ),
            )
        }
        Fact::CatalanParity { horizon } => {
            let lane = "parity rule";
            let residues = oracles::catalan_mod(2, horizon + 1);
            for (n, &r) in residues.iter().enumerate() {
                let expected = (n as u64 + 1).is_power_of_two();
                if (r == 1) != expected {
                    return lane_fail(lane, format!("parity breaks at n={n}"));
                }
            }
            lane_ok(lane, format!("odd exactly at 2^k - 1 up to {horizon}"))
        }
        Fact::E2eqEvenParity { half_horizon } => {
            let lane = "even-size parity and anti-periodicity";
            let evens = oracles::e2eq_even_mod(2, half_horizon + 1);
            for (i, &r) in evens.iter().enumerate() {
                let k = (i + 1) as u64;
                if (r == 1) != k.is_power_of_two() {
                    return lane_fail(lane, format!("parity breaks at half-size {k}"));
                }
            }
            let report = detect_periodicity_mod(&evens, 2, *half_horizon);
            if report.is_periodic() {
                return lane_fail(lane, "unexpected period on even indices".to_string());
            }
            lane_ok(
                lane,
                format!("odd exactly at power-of-two half sizes, no period within {half_horizon}"),
            )
        }
        Fact::TouchardBell { to_n } => {
            let lane = "evaluation at one";
            let bell = oracles::bell(to_n + 1);
            for (n, b) in bell.iter().enumerate() {
                let t = oracles::touchard_eval(n, &BigInt::from(1));
                if t != BigInt::from(b.clone()) {
                    return lane_fail(lane, format!("mismatch at n={n}"));
                }
            }
            lane_ok(lane, format!("matches Bell numbers to n={to_n}"))
        }
        Fact::MittagLefflerIdentity { to_n } => {
            let lane = "half-sum identity";
            for n in 1..=*to_n {
                for xv in -2i64..=3 {
                    let x = BigInt::from(xv);
                    let lhs = BigInt::from(2) * oracles::mittag_leffler_eval(n + 1, &x);
                    let rhs = &x
                        * (oracles::mittag_leffler_eval(n, &(&x + 1))
                            + BigInt::from(2) * oracles::mittag_leffler_eval(n, &x)
                            + oracles::mittag_leffler_eval(n, &(&x - 1)));
                    if lhs != rhs {
                        return lane_fail(lane, format!("identity breaks at n={n}, x={xv}"));
                    }
                }
            }
            lane_ok(lane, format!("holds for n=1..={to_n} at integer points"))
        }
        Fact::DiffReprMatches { dp_n } => {
            let lane = "difference representation";
            let Oracle::LinRec(rec) = &entry.oracle else {
                return lane_fail(lane, "entry is not recurrence-backed");
            };
            let repr = match recurrence_to_diff_representation(rec) {
                Ok(r) => r,
                Err(e) => return lane_fail(lane, format!("construction failed: {e}")),
            };
            let compiled = match repr.compile() {
                Ok(c) => c,
                Err(e) => return lane_fail(lane, format!("compilation failed: {e}")),
            };
            for n in 1..=*dp_n {
                let got = match eval_diff_with(&repr, &compiled, n) {
                    Ok(v) => v,
                    Err(e) => return lane_fail(lane, format!("evaluation failed at n={n}: {e}")),
                };
                let expected = eval_linrec(rec, n as i64).expect("n above base");
                if got != expected {
                    return lane_fail(lane, format!("first mismatch at n={n}"));
                }
            }
            lane_ok(lane, format!("difference matches values for n=1..={dp_n}"))
        }
        Fact::PathEncodingMatches { to_n } => {
            let lane = "path encoding";
            let (rec, points): (LinRecOf<MultiPoly>, Vec<Vec<BigInt>>) =
                match entry.name.as_str() {
                    "chebyshev" => {
                        let base0 = chebyshev_rec();
                        let ring = crate::series::PolyRing { nvars: 1 };
                        let t1 = crate::series::eval_linrec_in(&ring, &base0, 1).unwrap();
                        let t2 = crate::series::eval_linrec_in(&ring, &base0, 2).unwrap();
                        let rec = LinRecOf::new(base0.coeffs.clone(), vec![t1, t2]).with_base(1);
                        let points = (-2i64..=2).map(|x| vec![BigInt::from(x)]).collect();
                        (rec, points)
                    }
                    _ => {
                        let Oracle::LinRec(int_rec) = &entry.oracle else {
                            return lane_fail(lane, "entry is not recurrence-backed");
                        };
                        let rec1 = int_rec.rebase_forward(1).expect("rebase");
                        let rec = LinRecOf::new(
                            rec1.coeffs.iter().map(|c| MultiPoly::constant(0, c.clone())).collect(),
                            rec1.initials
                                .iter()
                                .map(|c| MultiPoly::constant(0, c.clone()))
                                .collect(),
                        )
                        .with_base(1);
                        (rec, vec![vec![]])
                    }
                };
            for values in &points {
                for n in 1..=*to_n {
                    let by_paths = match encode_recurrence_paths(&rec, n as i64, values) {
                        Ok(v) => v,
                        Err(e) => {
                            return lane_fail(lane, format!("path sum failed at n={n}: {e}"))
                        }
                    };
                    let ring = crate::series::PolyRing {
                        nvars: values.len(),
                    };
                    let direct = crate::series::eval_linrec_in(&ring, &rec, n as i64)
                        .expect("n above base")
                        .eval(values);
                    if by_paths != direct {
                        return lane_fail(
                            lane,
                            format!("first mismatch at n={n}, values {values:?}"),
                        );
                    }
                }
            }
            lane_ok(lane, format!("path sum matches evaluation for n=1..={to_n}"))
        }
    }
}

/// Residues of the entry's sequence starting at its base, for the CLI
/// periodicity front end.
pub fn entry_residues(name: &str, m: u64, len: usize) -> Result<Vec<u64>, CatalogError> {
    let entry = get_entry(name)?;
    Ok(entry.oracle.residues(entry.base, m, len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_relations_verify() {
        let report = verify_entry("binary_relations", 3).unwrap();
        assert!(report.all_pass(), "{report:?}");
        // oracle values 2, 16, 512 at n = 1..3 checked by the brute lane
        let entry = get_entry("binary_relations").unwrap();
        assert_eq!(entry.oracle.value(3), num_bigint::BigUint::from(512u32));
    }

    #[test]
    fn trees_verify_to_four() {
        let report = verify_entry("trees", 4).unwrap();
        let brute = report.lanes.iter().find(|l| l.lane == "oracle-vs-brute").unwrap();
        assert!(brute.pass, "{brute:?}");
    }

    #[test]
    fn e2eq_verify_to_five() {
        let report = verify_entry("e2eq", 5).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn stirling2_two_discovers_recurrence() {
        let report = verify_entry("stirling2(2)", 10).unwrap();
        assert!(report.all_pass(), "{report:?}");
        let lane = report
            .lanes
            .iter()
            .find(|l| l.lane == "discovered recurrence")
            .unwrap();
        assert!(lane.detail.contains("order 2"), "{lane:?}");
    }

    #[test]
    fn fibonacci_facts_pass() {
        let report = verify_entry("fibonacci", 12).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn catalan_facts_pass() {
        let report = verify_entry("catalan", 3).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn mittag_leffler_identity_passes() {
        let report = verify_entry("mittag_leffler", 6).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }
}
