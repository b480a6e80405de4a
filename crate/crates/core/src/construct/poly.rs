//! Symbolic sum-of-products counting expressions: a sum over guarded
//! assignments of bound relation symbols of a product, over the positions
//! satisfying each factor's predicate, of a monomial in the indeterminates.

use super::emit::rec_path_formula;
use super::paths::{is_valid_path_encoding, PathEncoding};
use super::ConstructError;
use crate::logic::{eval_context, CompiledFormula, Env, Formula, Relation, Vocabulary};
use crate::series::MultiPoly;
use crate::words::{compile_word_formula, Dfa};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Which positions of `[n]` a factor ranges over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositionPred {
    /// membership in a bound unary symbol
    InSymbol(String),
    /// an arbitrary formula with one free element variable
    Formula { var: String, body: Formula },
}

/// One product factor: the monomial is multiplied once per position
/// satisfying the predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub position: PositionPred,
    pub monomial: MultiPoly,
}

/// Guards restrict the admissible assignments of bound symbols. Structured
/// verifier clauses keep the critical path free of formula generation; the
/// emitter below turns them into sentences when a logical reading is needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuardClause {
    Formula(Formula),
    /// `blocks` partition the positions satisfying `of`
    Partition {
        blocks: Vec<String>,
        of: PositionPred,
    },
    /// the bound symbols `u1..ur`, `i1..ir`, `s` form a valid recurrence
    /// path encoding
    RecPath { order: usize },
}

#[derive(Debug, Clone)]
pub struct SpeckerPolynomial {
    /// bound relation symbols (all counted)
    pub vocab: Vocabulary,
    /// guards may address positions through the order
    pub ordered: bool,
    pub guard: Vec<GuardClause>,
    pub factors: Vec<Factor>,
    pub nvars: usize,
}

impl SpeckerPolynomial {
    /// Purely formula-based guard view, used for order-invariance checks and
    /// word compilation. `RecPath` and `Partition` clauses are emitted as
    /// sentences; `Partition` over a formula predicate is emitted with the
    /// predicate inlined.
    pub fn guard_formula(&self) -> Result<Formula, ConstructError> {
        let mut clauses = Vec::new();
        for clause in &self.guard {
            match clause {
                GuardClause::Formula(f) => clauses.push(f.clone()),
                GuardClause::RecPath { order } => clauses.extend(rec_path_formula(*order)),
                GuardClause::Partition { blocks, of } => {
                    let of_formula = |v: &str| -> Formula {
                        match of {
                            PositionPred::InSymbol(s) => Formula::rel(s, &[v]),
                            PositionPred::Formula { var, body } => {
                                rename_free(body, var, v)
                            }
                        }
                    };
                    // blocks are disjoint
                    for a in 0..blocks.len() {
                        for b in (a + 1)..blocks.len() {
                            clauses.push(Formula::forall(
                                "pv",
                                Formula::not(Formula::and(
                                    Formula::rel(&blocks[a], &["pv"]),
                                    Formula::rel(&blocks[b], &["pv"]),
                                )),
                            ));
                        }
                    }
                    // union is exactly the guarded position set
                    let union = Formula::disj(
                        blocks.iter().map(|b| Formula::rel(b, &["pv"])).collect(),
                    );
                    clauses.push(Formula::forall(
                        "pv",
                        Formula::and(
                            Formula::implies(union.clone(), of_formula("pv")),
                            Formula::implies(of_formula("pv"), union),
                        ),
                    ));
                }
            }
        }
        Ok(Formula::conj(clauses))
    }
}

fn rename_free(body: &Formula, from: &str, to: &str) -> Formula {
    if from == to {
        return body.clone();
    }
    match body {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::And(a, b) => Formula::and(rename_free(a, from, to), rename_free(b, from, to)),
        Formula::Or(a, b) => Formula::or(rename_free(a, from, to), rename_free(b, from, to)),
        Formula::Implies(a, b) => {
            Formula::implies(rename_free(a, from, to), rename_free(b, from, to))
        }
        Formula::Not(a) => Formula::not(rename_free(a, from, to)),
        Formula::Forall(v, a) if v != from => {
            Formula::Forall(v.clone(), Box::new(rename_free(a, from, to)))
        }
        Formula::Exists(v, a) if v != from => {
            Formula::Exists(v.clone(), Box::new(rename_free(a, from, to)))
        }
        Formula::ForallSet(v, a) => {
            Formula::ForallSet(v.clone(), Box::new(rename_free(a, from, to)))
        }
        Formula::ExistsSet(v, a) => {
            Formula::ExistsSet(v.clone(), Box::new(rename_free(a, from, to)))
        }
        Formula::CMod {
            residue,
            modulus,
            var,
            body,
        } if var != from => Formula::CMod {
            residue: *residue,
            modulus: *modulus,
            var: var.clone(),
            body: Box::new(rename_free(body, from, to)),
        },
        Formula::Rel { symbol, terms } => Formula::Rel {
            symbol: symbol.clone(),
            terms: terms
                .iter()
                .map(|t| if t == from { to.to_string() } else { t.clone() })
                .collect(),
        },
        Formula::In { term, set } => Formula::In {
            term: if term == from {
                to.to_string()
            } else {
                term.clone()
            },
            set: set.clone(),
        },
        Formula::Eq(a, b) => Formula::Eq(
            if a == from { to.to_string() } else { a.clone() },
            if b == from { to.to_string() } else { b.clone() },
        ),
        Formula::Lt(a, b) => Formula::Lt(
            if a == from { to.to_string() } else { a.clone() },
            if b == from { to.to_string() } else { b.clone() },
        ),
        // binder shadows the renamed variable
        other => other.clone(),
    }
}

/// Evaluate by brute-force enumeration of the bound-symbol assignments.
/// The default route for arbitrary (including binary) bound symbols; the
/// position-DP route below takes over for unary, order-local polynomials.
pub fn eval_specker_polynomial(
    sp: &SpeckerPolynomial,
    n: usize,
    values: &[BigInt],
) -> Result<BigInt, ConstructError> {
    if values.len() != sp.nvars {
        return Err(ConstructError::UnassignedIndeterminate {
            index: values.len(),
        });
    }
    let mut total_bits = 0u64;
    let mut bits_per: Vec<u32> = Vec::new();
    for decl in sp.vocab.symbols() {
        let bits = (n as u64).pow(decl.arity as u32);
        if bits > 62 {
            return Err(ConstructError::BruteSpaceTooLarge { bits });
        }
        bits_per.push(bits as u32);
        total_bits += bits;
    }
    if total_bits > 26 {
        return Err(ConstructError::BruteSpaceTooLarge { bits: total_bits });
    }

    let ranks: Option<Vec<u32>> = if sp.ordered {
        Some((1..=n as u32).collect())
    } else {
        None
    };

    // precompile guard formulas and factor predicates
    let env = Env::default();
    let mut guard_formulas: Vec<CompiledFormula> = Vec::new();
    let mut rec_path_order: Option<usize> = None;
    let mut partitions: Vec<(Vec<usize>, PositionPred)> = Vec::new();
    for clause in &sp.guard {
        match clause {
            GuardClause::Formula(f) => {
                guard_formulas.push(CompiledFormula::build(f, &sp.vocab, &env)?)
            }
            GuardClause::RecPath { order } => rec_path_order = Some(*order),
            GuardClause::Partition { blocks, of } => {
                let idxs = blocks
                    .iter()
                    .map(|b| sp.vocab.symbol_index(b).expect("block symbol declared"))
                    .collect();
                partitions.push((idxs, of.clone()));
            }
        }
    }
    let factor_monomials: Vec<BigInt> = sp
        .factors
        .iter()
        .map(|f| f.monomial.eval(values))
        .collect();
    let compiled_preds: Vec<Option<CompiledFormula>> = sp
        .factors
        .iter()
        .map(|f| match &f.position {
            PositionPred::InSymbol(_) => Ok(None),
            PositionPred::Formula { var, body } => {
                let env = Env::with_individual(var, 1);
                CompiledFormula::build(body, &sp.vocab, &env).map(Some)
            }
        })
        .collect::<Result<_, _>>()?;

    let mut relations: Vec<Relation> = sp
        .vocab
        .symbols()
        .iter()
        .map(|d| Relation::empty(d.arity, n))
        .collect();

    let mut total = BigInt::zero();
    let assignments: u64 = 1 << total_bits;
    'outer: for code in 0..assignments {
        let mut rest = code;
        for (idx, &bits) in bits_per.iter().enumerate() {
            let mask = rest & ((1u64 << bits) - 1);
            rest >>= bits;
            relations[idx].set_mask(mask);
        }
        let ctx = eval_context(n, ranks.as_deref(), &relations);
        for g in &guard_formulas {
            if !g.eval_ctx(&ctx, &[], &[]) {
                continue 'outer;
            }
        }
        if let Some(r) = rec_path_order {
            let enc = path_encoding_from_relations(&sp.vocab, &relations, n, r);
            if !enc.map(|e| is_valid_path_encoding(&e)).unwrap_or(false) {
                continue 'outer;
            }
        }
        for (blocks, of) in &partitions {
            if !partition_holds(sp, &relations, blocks, of, n, ranks.as_deref())? {
                continue 'outer;
            }
        }
        // weight of this assignment
        let mut weight = BigInt::one();
        for (j, factor) in sp.factors.iter().enumerate() {
            let count = match &factor.position {
                PositionPred::InSymbol(name) => {
                    let idx = sp.vocab.symbol_index(name).expect("factor symbol");
                    relations[idx].count_tuples()
                }
                PositionPred::Formula { .. } => {
                    let pred = compiled_preds[j].as_ref().unwrap();
                    (1..=n as u32)
                        .filter(|&v| pred.eval_ctx(&ctx, &[v], &[]))
                        .count()
                }
            };
            for _ in 0..count {
                weight *= &factor_monomials[j];
            }
            if weight.is_zero() {
                break;
            }
        }
        total += weight;
    }
    Ok(total)
}

fn path_encoding_from_relations(
    vocab: &Vocabulary,
    relations: &[Relation],
    n: usize,
    r: usize,
) -> Option<PathEncoding> {
    if n == 0 || n > 63 {
        return None;
    }
    let mask_of = |name: &str| -> Option<u64> {
        let idx = vocab.symbol_index(name)?;
        Some(relations[idx].unary_mask())
    };
    let mut enc = PathEncoding {
        n,
        order: r,
        step_blocks: Vec::with_capacity(r),
        initial_blocks: Vec::with_capacity(r),
        skipped: mask_of("s")?,
    };
    for i in 1..=r {
        enc.step_blocks.push(mask_of(&format!("u{i}"))?);
    }
    for i in 1..=r {
        enc.initial_blocks.push(mask_of(&format!("i{i}"))?);
    }
    Some(enc)
}

fn partition_holds(
    sp: &SpeckerPolynomial,
    relations: &[Relation],
    blocks: &[usize],
    of: &PositionPred,
    n: usize,
    ranks: Option<&[u32]>,
) -> Result<bool, ConstructError> {
    let ctx = eval_context(n, ranks, relations);
    let in_of = |v: u32| -> Result<bool, ConstructError> {
        match of {
            PositionPred::InSymbol(name) => {
                let idx = sp.vocab.symbol_index(name).expect("partition base symbol");
                Ok(relations[idx].contains(&[v]))
            }
            PositionPred::Formula { var, body } => {
                let env = Env::with_individual(var, v);
                let compiled = CompiledFormula::build(body, &sp.vocab, &env)?;
                Ok(compiled.eval_ctx(&ctx, &[v], &[]))
            }
        }
    };
    for v in 1..=n as u32 {
        let members = blocks
            .iter()
            .filter(|&&b| relations[b].contains(&[v]))
            .count();
        let expected = usize::from(in_of(v)?);
        if members != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Position-indexed dynamic programming through the word compiler: valid for
/// polynomials whose bound symbols are all unary, whose guards emit to
/// sentences, and whose factors are symbol memberships.
pub fn eval_specker_polynomial_dp(
    sp: &SpeckerPolynomial,
    n: usize,
    values: &[BigInt],
) -> Result<BigInt, ConstructError> {
    if values.len() != sp.nvars {
        return Err(ConstructError::UnassignedIndeterminate {
            index: values.len(),
        });
    }
    for decl in sp.vocab.symbols() {
        if decl.arity != 1 {
            return Err(ConstructError::NonUnaryBoundSymbol {
                symbol: decl.name.clone(),
            });
        }
    }
    let guard = sp.guard_formula()?;
    let dfa = compile_word_formula(&guard, &sp.vocab)?;
    let factor_bits: Vec<(usize, BigInt)> = sp
        .factors
        .iter()
        .map(|f| match &f.position {
            PositionPred::InSymbol(name) => {
                let bit = sp
                    .vocab
                    .counted()
                    .position(|d| d.name == *name)
                    .expect("factor symbol is counted");
                Ok((bit, f.monomial.eval(values)))
            }
            PositionPred::Formula { .. } => Err(ConstructError::ValidationFailed {
                context: "dp factors must be symbol memberships",
            }),
        })
        .collect::<Result<_, _>>()?;
    Ok(weighted_word_sum(&dfa, n, &factor_bits))
}

/// Sum over accepted length-`n` words of the per-letter weight products.
pub(crate) fn weighted_word_sum(dfa: &Dfa, n: usize, factor_bits: &[(usize, BigInt)]) -> BigInt {
    let alphabet = dfa.alphabet_size();
    let letter_weights: Vec<BigInt> = (0..alphabet)
        .map(|l| {
            let mut w = BigInt::one();
            for (bit, m) in factor_bits {
                if (l >> bit) & 1 == 1 {
                    w *= m;
                }
            }
            w
        })
        .collect();
    let mut v = vec![BigInt::zero(); dfa.num_states()];
    v[dfa.initial()] = BigInt::one();
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); dfa.num_states()];
        for (q, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (l, lw) in letter_weights.iter().enumerate() {
                if lw.is_zero() {
                    continue;
                }
                let t = dfa.next(q, l);
                next[t] += coeff * lw;
            }
        }
        v = next;
    }
    (0..dfa.num_states())
        .filter(|&q| dfa.is_accepting(q))
        .map(|q| v[q].clone())
        .sum()
}

/// The substitution transform: replace each indeterminate `z_i` by an
/// integer polynomial `h_i` over fresh variables. Every factor's substituted
/// monomial is expanded into its terms; the positions of the factor are
/// partitioned into one fresh block per term, exponents unroll into repeated
/// factors, and each term's integer coefficient becomes a fresh
/// indeterminate whose standard value is returned alongside.
pub fn substitute_indeterminates(
    sp: &SpeckerPolynomial,
    subs: &[MultiPoly],
) -> Result<(SpeckerPolynomial, Vec<BigInt>), ConstructError> {
    if subs.len() != sp.nvars {
        return Err(ConstructError::UnassignedIndeterminate { index: subs.len() });
    }
    let w_vars = subs.first().map(|p| p.nvars()).unwrap_or(0);

    // first pass: count fresh coefficient indeterminates
    let expansions: Vec<Vec<(Vec<u32>, BigInt)>> = sp
        .factors
        .iter()
        .map(|f| {
            f.monomial
                .substitute(subs)
                .terms()
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect()
        })
        .collect();
    let fresh_count: usize = expansions.iter().map(|e| e.len()).sum();
    let nvars_out = w_vars + fresh_count;

    let mut decls: Vec<crate::logic::SymbolDecl> = sp.vocab.symbols().to_vec();
    let mut guard = sp.guard.clone();
    let mut factors: Vec<Factor> = Vec::new();
    let mut constants: Vec<BigInt> = Vec::new();
    let mut fresh_index = 0usize;

    for (j, (factor, expansion)) in sp.factors.iter().zip(&expansions).enumerate() {
        let mut block_names = Vec::with_capacity(expansion.len());
        for d in 0..expansion.len() {
            let name = format!("part{j}_{d}");
            decls.push(crate::logic::SymbolDecl {
                name: name.clone(),
                arity: 1,
                counted: true,
            });
            block_names.push(name);
        }
        guard.push(GuardClause::Partition {
            blocks: block_names.clone(),
            of: factor.position.clone(),
        });
        for (d, (exps, coeff)) in expansion.iter().enumerate() {
            let pos = PositionPred::InSymbol(block_names[d].clone());
            // the coefficient becomes a fresh indeterminate
            factors.push(Factor {
                position: pos.clone(),
                monomial: MultiPoly::var(nvars_out, w_vars + fresh_index),
            });
            constants.push(coeff.clone());
            fresh_index += 1;
            // exponents unroll into repeated factors
            for (var, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    factors.push(Factor {
                        position: pos.clone(),
                        monomial: MultiPoly::var(nvars_out, var),
                    });
                }
            }
        }
    }

    let vocab = Vocabulary::new(decls).map_err(ConstructError::Logic)?;
    Ok((
        SpeckerPolynomial {
            vocab,
            ordered: sp.ordered,
            guard,
            factors,
            nvars: nvars_out,
        },
        constants,
    ))
}
