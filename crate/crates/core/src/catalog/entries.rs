//! The entry registry: each family bundles a defining sentence (where one
//! exists), an independent oracle, feasibility bounds for the brute-force
//! lane, and machine-checkable facts frozen from the oracle lane.

use super::{formulas, oracles};
use crate::logic::{Formula, Vocabulary};
use crate::series::{LinRec, LinRecOf, MultiPoly};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),

    #[error("lane '{lane}' failed: {detail}")]
    LaneFailed { lane: String, detail: String },
}

/// Independent value generator for one family.
#[derive(Debug, Clone)]
pub enum Oracle {
    BinaryRelations,
    LinearOrders,
    Bell,
    Stirling2(usize),
    Stirling1(usize),
    E2eq,
    Catalan,
    Eulerian,
    Trees,
    LinRec(LinRec),
}

impl Oracle {
    pub fn value(&self, n: usize) -> BigUint {
        match self {
            Oracle::BinaryRelations => oracles::binary_relations(n),
            Oracle::LinearOrders => oracles::factorial(n),
            Oracle::Bell => oracles::bell(n + 1).pop().unwrap(),
            Oracle::Stirling2(r) => oracles::stirling2(n, *r),
            Oracle::Stirling1(r) => oracles::stirling1(n, *r),
            Oracle::E2eq => oracles::e2eq(n),
            Oracle::Catalan => oracles::catalan(n + 1).pop().unwrap(),
            Oracle::Eulerian => oracles::eulerian(n + 1).pop().unwrap(),
            Oracle::Trees => oracles::trees(n),
            Oracle::LinRec(rec) => {
                let v = crate::series::eval_linrec(rec, n as i64).expect("index above base");
                v.to_biguint().expect("nonnegative value")
            }
        }
    }

    /// Residues `f(base + i) mod m` for `i = 0..len`.
    pub fn residues(&self, base: usize, m: u64, len: usize) -> Vec<u64> {
        match self {
            Oracle::BinaryRelations => shift(oracles::binary_relations_mod(m, base + len), base),
            Oracle::LinearOrders => shift(oracles::factorial_mod(m, base + len), base),
            Oracle::Bell => shift(oracles::bell_mod(m, base + len), base),
            Oracle::Stirling2(r) => shift(oracles::stirling2_mod(m, *r, base + len), base),
            Oracle::Stirling1(r) => shift(oracles::stirling1_mod(m, *r, base + len), base),
            Oracle::E2eq => (0..len)
                .map(|i| {
                    (self.value(base + i) % BigUint::from(m))
                        .to_u64()
                        .unwrap()
                })
                .collect(),
            Oracle::Catalan => shift(oracles::catalan_mod(m, base + len), base),
            Oracle::Eulerian => shift(oracles::eulerian_mod(m, base + len), base),
            Oracle::Trees => shift(oracles::trees_mod(m, base + len), base),
            Oracle::LinRec(rec) => {
                let reduced = rec.reduce_mod(m);
                let ring = crate::series::ModRing { m };
                let terms =
                    crate::series::generate_terms_in(&ring, &reduced, base + len);
                shift(terms, base.saturating_sub(rec.base.max(0) as usize))
            }
        }
    }
}

fn shift(mut v: Vec<u64>, base: usize) -> Vec<u64> {
    v.drain(..base.min(v.len()));
    v
}

/// Machine-checkable claims, frozen from the oracle lane.
#[derive(Debug, Clone)]
pub enum Fact {
    /// periodicity detection over the oracle residues finds this verdict
    PeriodicMod {
        m: u64,
        horizon: usize,
        expect: Option<(usize, usize)>,
    },
    NoPeriodMod {
        m: u64,
        horizon: usize,
    },
    /// minimal integer recurrence detected from the oracle prefix
    MinimalRecurrence {
        coeffs: Vec<i64>,
        preperiod: usize,
    },
    /// no integer recurrence stabilizes on a prefix of this length
    NoIntegerRecurrence {
        prefix_len: usize,
    },
    /// the word-compiled sentence's extracted recurrence reproduces the
    /// oracle values up to this index
    DiscoveredRecurrenceReproduces {
        to_n: usize,
    },
    /// Catalan parity: odd exactly at indices of the form 2^k - 1
    CatalanParity {
        horizon: usize,
    },
    /// E_{2,=} at even sizes is odd exactly when the half size is a power
    /// of two, and finds no period mod 2 within the horizon
    E2eqEvenParity {
        half_horizon: usize,
    },
    /// Touchard evaluations at one equal the Bell numbers
    TouchardBell {
        to_n: usize,
    },
    /// the Mittag-Leffler half-sum identity holds at integer points
    MittagLefflerIdentity {
        to_n: usize,
    },
    /// the difference representation reproduces the recurrence by word-DP
    DiffReprMatches {
        dp_n: usize,
    },
    /// the path-encoding sum equals direct evaluation at integer points
    PathEncodingMatches {
        to_n: usize,
    },
}

/// How the entry's values are produced and which extra lanes apply.
#[derive(Debug, Clone)]
pub enum EntryKind {
    /// a counting family with an independent sequence oracle
    Sequence,
    /// backed by an explicit integer recurrence
    Recurrence,
    /// polynomial-valued family evaluated at integer points
    Polynomial,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub kind: EntryKind,
    pub oracle: Oracle,
    /// first index with a meaningful value
    pub base: usize,
    /// defining sentence for the brute-force lane
    pub formula: Option<(Vocabulary, Formula)>,
    pub ordered: bool,
    /// ceiling for the brute-force cross-check
    pub brute_max_n: usize,
    /// ordered unary sentence for the word-compiler lane
    pub word_formula: Option<(Vocabulary, Formula)>,
    pub facts: Vec<Fact>,
}

/// Chebyshev polynomials as a recurrence over `Z[x]`, indexed from 0.
pub fn chebyshev_rec() -> LinRecOf<MultiPoly> {
    let two_x = MultiPoly::monomial(1, 2, vec![1]);
    LinRecOf::new(
        vec![two_x, MultiPoly::constant(1, -1)],
        vec![MultiPoly::constant(1, 1), MultiPoly::var(1, 0)],
    )
}

/// Fibonacci polynomials: F1 = 1, F2 = x, F(n) = x F(n-1) + F(n-2).
pub fn fibonacci_poly_rec() -> LinRecOf<MultiPoly> {
    LinRecOf::new(
        vec![MultiPoly::var(1, 0), MultiPoly::constant(1, 1)],
        vec![MultiPoly::constant(1, 1), MultiPoly::var(1, 0)],
    )
    .with_base(1)
}

pub fn list_entries() -> Vec<&'static str> {
    vec![
        "binary_relations",
        "linear_orders",
        "equivalence_relations",
        "stirling2(1)",
        "stirling2(2)",
        "stirling2(3)",
        "stirling1(1)",
        "stirling1(2)",
        "e2eq",
        "catalan",
        "eulerian_graphs",
        "trees",
        "touchard",
        "mittag_leffler",
        "fibonacci",
        "lucas",
        "chebyshev",
    ]
}

pub fn get_entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    let entry = match name {
        "binary_relations" => CatalogEntry {
            name: name.into(),
            description: "all binary relations on [n]".into(),
            kind: EntryKind::Sequence,
            oracle: Oracle::BinaryRelations,
            base: 0,
            formula: Some((
                Vocabulary::from_triples(&[("E", 2, true)]),
                Formula::True,
            )),
            ordered: false,
            brute_max_n: 4,
            word_formula: None,
            facts: vec![
                Fact::PeriodicMod { m: 2, horizon: 200, expect: Some((1, 1)) },
                Fact::PeriodicMod { m: 3, horizon: 200, expect: Some((0, 2)) },
                Fact::PeriodicMod { m: 4, horizon: 200, expect: Some((2, 1)) },
                Fact::PeriodicMod { m: 5, horizon: 200, expect: Some((0, 2)) },
            ],
        },
        "linear_orders" => {
            let (v, phi) = formulas::linear_orders();
            CatalogEntry {
                name: name.into(),
                description: "linear orders on [n]".into(),
                kind: EntryKind::Sequence,
                oracle: Oracle::LinearOrders,
                base: 0,
                formula: Some((v, phi)),
                ordered: false,
                brute_max_n: 5,
                word_formula: None,
                facts: vec![
                    Fact::PeriodicMod { m: 2, horizon: 200, expect: Some((2, 1)) },
                    Fact::PeriodicMod { m: 3, horizon: 200, expect: Some((3, 1)) },
                    Fact::PeriodicMod { m: 4, horizon: 200, expect: Some((4, 1)) },
                    Fact::PeriodicMod { m: 5, horizon: 200, expect: Some((5, 1)) },
                    Fact::NoIntegerRecurrence { prefix_len: 16 },
                ],
            }
        }
        "equivalence_relations" => {
            let (v, phi) = formulas::equivalence_relations();
            CatalogEntry {
                name: name.into(),
                description: "equivalence relations on [n] (Bell numbers)".into(),
                kind: EntryKind::Sequence,
                oracle: Oracle::Bell,
                base: 0,
                formula: Some((v, phi)),
                ordered: false,
                brute_max_n: 5,
                word_formula: None,
                facts: vec![
                    Fact::PeriodicMod { m: 2, horizon: 120, expect: Some((0, 3)) },
                    Fact::PeriodicMod { m: 3, horizon: 200, expect: Some((0, 13)) },
                    Fact::PeriodicMod { m: 4, horizon: 200, expect: Some((0, 12)) },
                    // the cycle mod 5 is longer than the default horizon;
                    // 1800 terms are needed to certify it
                    Fact::PeriodicMod { m: 5, horizon: 1800, expect: Some((0, 781)) },
                    Fact::NoIntegerRecurrence { prefix_len: 16 },
                ],
            }
        }
        "stirling2(1)" | "stirling2(2)" | "stirling2(3)" => {
            let r: usize = name[10..name.len() - 1].parse().unwrap();
            let (v, phi) = formulas::stirling2_unordered(r);
            let word = formulas::stirling2_ordered(r);
            let mut facts = vec![Fact::DiscoveredRecurrenceReproduces { to_n: 50 }];
            if r == 2 {
                facts.push(Fact::MinimalRecurrence { coeffs: vec![3, -2], preperiod: 0 });
                facts.push(Fact::PeriodicMod { m: 2, horizon: 200, expect: Some((1, 1)) });
                facts.push(Fact::PeriodicMod { m: 3, horizon: 200, expect: Some((0, 2)) });
                facts.push(Fact::PeriodicMod { m: 5, horizon: 200, expect: Some((0, 4)) });
            }
            CatalogEntry {
                name: name.into(),
                description: format!("partitions of [n] into {r} nonempty blocks"),
                kind: EntryKind::Sequence,
                oracle: Oracle::Stirling2(r),
                base: 1,
                formula: Some((v, phi)),
                ordered: false,
                brute_max_n: 5,
                word_formula: Some(word),
                facts,
            }
        }
        "stirling1(1)" | "stirling1(2)" => {
            let r: usize = name[10..name.len() - 1].parse().unwrap();
            let (v, phi) = formulas::stirling1(r);
            let facts = if r == 1 {
                vec![
                    Fact::PeriodicMod { m: 2, horizon: 200, expect: Some((2, 1)) },
                    Fact::PeriodicMod { m: 3, horizon: 200, expect: Some((3, 1)) },
                    Fact::PeriodicMod { m: 4, horizon: 200, expect: Some((4, 1)) },
                    Fact::NoIntegerRecurrence { prefix_len: 16 },
                ]
            } else {
                vec![
                    Fact::PeriodicMod { m: 2, horizon: 200, expect: Some((4, 1)) },
                    Fact::PeriodicMod { m: 3, horizon: 200, expect: Some((6, 1)) },
                    Fact::PeriodicMod { m: 4, horizon: 200, expect: Some((6, 1)) },
                    Fact::NoIntegerRecurrence { prefix_len: 16 },
                ]
            };
            CatalogEntry {
                name: name.into(),
                description: format!("permutations of [n] with exactly {r} cycles"),
                kind: EntryKind::Sequence,
                oracle: Oracle::Stirling1(r),
                base: 1,
                formula: Some((v, phi)),
                ordered: false,
                brute_max_n: 5,
                word_formula: None,
                facts,
            }
        }
        "e2eq" => {
            let (v, phi) = formulas::e2eq_formula();
            CatalogEntry {
                name: name.into(),
                description: "partitions of [n] into two equal-size classes".into(),
                kind: EntryKind::Sequence,
                oracle: Oracle::E2eq,
                base: 1,
                formula: Some((v, phi)),
                ordered: true,
                brute_max_n: 4,
                word_formula: None,
                facts: vec![Fact::E2eqEvenParity { half_horizon: 64 }],
            }
        }
        "catalan" => {
            let (v, phi) = formulas::catalan();
            CatalogEntry {
                name: name.into(),
                description: "balanced parenthesis arrangements (Catalan numbers)".into(),
                kind: EntryKind::Sequence,
                oracle: Oracle::Catalan,
                base: 1,
                formula: Some((v, phi)),
                ordered: true,
                brute_max_n: 3,
                word_formula: None,
                facts: vec![
                    Fact::NoPeriodMod { m: 2, horizon: 64 },
                    Fact::CatalanParity { horizon: 64 },
                ],
            }
        }
        "eulerian_graphs" => {
            let (v, phi) = formulas::eulerian_graphs();
            CatalogEntry {
                name: name.into(),
                description: "connected graphs with all degrees even".into(),
                kind: EntryKind::Sequence,
                oracle: Oracle::Eulerian,
                base: 1,
                formula: Some((v, phi)),
                ordered: false,
                brute_max_n: 5,
                word_formula: None,
                facts: vec![
                    Fact::PeriodicMod { m: 2, horizon: 200, expect: Some((4, 1)) },
                    Fact::PeriodicMod { m: 3, horizon: 200, expect: Some((1, 4)) },
                    Fact::PeriodicMod { m: 4, horizon: 200, expect: Some((8, 1)) },
                    Fact::PeriodicMod { m: 5, horizon: 200, expect: Some((1, 8)) },
                ],
            }
        }
        "trees" => {
            let (v, phi) = formulas::trees();
            CatalogEntry {
                name: name.into(),
                description: "labeled trees on [n]".into(),
                kind: EntryKind::Sequence,
                oracle: Oracle::Trees,
                base: 1,
                formula: Some((v, phi)),
                ordered: false,
                brute_max_n: 5,
                word_formula: None,
                facts: vec![
                    Fact::PeriodicMod { m: 2, horizon: 200, expect: Some((2, 2)) },
                    Fact::PeriodicMod { m: 3, horizon: 200, expect: Some((0, 6)) },
                    Fact::PeriodicMod { m: 4, horizon: 200, expect: Some((2, 4)) },
                    Fact::PeriodicMod { m: 5, horizon: 200, expect: Some((0, 20)) },
                    Fact::NoIntegerRecurrence { prefix_len: 16 },
                ],
            }
        }
        "touchard" => CatalogEntry {
            name: name.into(),
            description: "Touchard polynomials: cliques weighted by component minima".into(),
            kind: EntryKind::Polynomial,
            oracle: Oracle::Bell,
            base: 0,
            formula: None,
            ordered: true,
            brute_max_n: 4,
            word_formula: None,
            facts: vec![Fact::TouchardBell { to_n: 6 }],
        },
        "mittag_leffler" => CatalogEntry {
            name: name.into(),
            description: "Mittag-Leffler polynomials by the direct falling-factorial sum".into(),
            kind: EntryKind::Polynomial,
            oracle: Oracle::Bell, // unused; evaluations go through the direct sum
            base: 1,
            formula: None,
            ordered: true,
            brute_max_n: 0,
            word_formula: None,
            facts: vec![Fact::MittagLefflerIdentity { to_n: 6 }],
        },
        "fibonacci" => CatalogEntry {
            name: name.into(),
            description: "Fibonacci numbers".into(),
            kind: EntryKind::Recurrence,
            oracle: Oracle::LinRec(LinRec::from_i64(&[1, 1], &[0, 1])),
            base: 0,
            formula: None,
            ordered: true,
            brute_max_n: 6,
            word_formula: None,
            facts: vec![
                Fact::MinimalRecurrence { coeffs: vec![1, 1], preperiod: 0 },
                Fact::PeriodicMod { m: 2, horizon: 64, expect: Some((0, 3)) },
                Fact::DiffReprMatches { dp_n: 20 },
                Fact::PathEncodingMatches { to_n: 12 },
            ],
        },
        "lucas" => CatalogEntry {
            name: name.into(),
            description: "Lucas numbers".into(),
            kind: EntryKind::Recurrence,
            oracle: Oracle::LinRec(LinRec::from_i64(&[1, 1], &[2, 1])),
            base: 0,
            formula: None,
            ordered: true,
            brute_max_n: 6,
            word_formula: None,
            facts: vec![
                Fact::MinimalRecurrence { coeffs: vec![1, 1], preperiod: 0 },
                Fact::DiffReprMatches { dp_n: 20 },
                Fact::PathEncodingMatches { to_n: 12 },
            ],
        },
        "chebyshev" => CatalogEntry {
            name: name.into(),
            description: "Chebyshev polynomials of the first kind".into(),
            kind: EntryKind::Polynomial,
            oracle: Oracle::LinRec(LinRec::from_i64(&[2], &[1])), // placeholder; values go through the polynomial recurrence
            base: 0,
            formula: None,
            ordered: true,
            brute_max_n: 0,
            word_formula: None,
            facts: vec![Fact::PathEncodingMatches { to_n: 12 }],
        },
        other => return Err(CatalogError::UnknownEntry(other.to_string())),
    };
    Ok(entry)
}

/// Entry metadata in a JSON-friendly shape.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EntryMeta {
    pub name: String,
    pub description: String,
    pub base: usize,
    pub has_formula: bool,
    pub ordered: bool,
    pub brute_max_n: usize,
    pub word_shaped: bool,
    pub facts: usize,
}

impl CatalogEntry {
    pub fn meta(&self) -> EntryMeta {
        EntryMeta {
            name: self.name.clone(),
            description: self.description.clone(),
            base: self.base,
            has_formula: self.formula.is_some(),
            ordered: self.ordered,
            brute_max_n: self.brute_max_n,
            word_shaped: self.word_formula.is_some(),
            facts: self.facts.len(),
        }
    }

    /// Oracle values `f(base..=max_n)` as decimal strings.
    pub fn sequence(&self, max_n: usize) -> Vec<(usize, String)> {
        let eval_big = |n: usize| -> BigInt {
            match (&self.kind, self.name.as_str()) {
                (EntryKind::Polynomial, "touchard") => {
                    oracles::touchard_eval(n, &BigInt::from(1))
                }
                (EntryKind::Polynomial, "mittag_leffler") => {
                    oracles::mittag_leffler_eval(n, &BigInt::from(1))
                }
                (EntryKind::Polynomial, "chebyshev") => {
                    let rec = chebyshev_rec();
                    let ring = crate::series::PolyRing { nvars: 1 };
                    crate::series::eval_linrec_in(&ring, &rec, n as i64)
                        .map(|p| p.eval(&[BigInt::from(1)]))
                        .unwrap_or_default()
                }
                _ => BigInt::from(self.oracle.value(n)),
            }
        };
        (self.base..=max_n)
            .map(|n| (n, eval_big(n).to_string()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup_and_unknown() {
        for name in list_entries() {
            let entry = get_entry(name).unwrap();
            assert_eq!(entry.name, name);
        }
        assert!(matches!(
            get_entry("unknown"),
            Err(CatalogError::UnknownEntry(_))
        ));
    }

    #[test]
    fn bell_entry_has_equivalence_formula() {
        let entry = get_entry("equivalence_relations").unwrap();
        let (v, phi) = entry.formula.unwrap();
        assert!(phi.well_formed(&v, &[]).is_ok());
        assert_eq!(entry.oracle.value(4), BigUint::from(15u32));
    }

    #[test]
    fn catalan_entry_is_ordered() {
        let entry = get_entry("catalan").unwrap();
        assert!(entry.ordered);
        assert_eq!(entry.base, 1);
        assert_eq!(entry.oracle.value(3), BigUint::from(5u32));
    }

    #[test]
    fn residues_start_at_base() {
        let entry = get_entry("stirling1(1)").unwrap();
        // (n-1)! mod 3 for n = 1.. : 1, 1, 2, 0, 0, ...
        let rs = entry.oracle.residues(entry.base, 3, 6);
        assert_eq!(rs, vec![1, 1, 2, 0, 0, 0]);
    }
}
