//! Brute-force model counting: the trusted slow oracle.
//!
//! `specker_count` enumerates every interpretation of the counted relation
//! symbols over `[n]` and counts the assignments satisfying the sentence.
//! The assignment space is streamed symbol by symbol; top-level conjuncts
//! are evaluated as soon as all their counted symbols are fixed, pruning the
//! remaining subtree exactly. Symbols never mentioned by a remaining
//! conjunct are counted in closed form (`2^bits`) instead of being iterated.
//!
//! With the `parallel` feature the first symbol's mask range is split into
//! fixed-size chunks processed by rayon; partial counts combine by addition,
//! so the total is independent of the worker count.

use crate::logic::{CompiledFormula, Env, Formula, LogicError, Relation, Vocabulary};
use crate::util::{permutations, SplitMix64};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

/// Default cap on enumeration steps per counting call.
pub const DEFAULT_BUDGET: u64 = 1 << 30;

/// How many orders a sampled c.o.i. sweep draws.
pub const SAMPLED_ORDERS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error(transparent)]
    Logic(#[from] LogicError),

    #[error("enumeration budget of {budget} assignments exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("interpretation space for symbol '{symbol}' needs {bits} bits (max 62)")]
    SpaceTooLarge { symbol: String, bits: u64 },

    #[error("formula uses '<' but the task is unordered")]
    OrderedFormulaUnorderedTask,

    #[error("symbol '{0}' is counted and cannot carry a fixed interpretation")]
    FixedSymbolIsCounted(String),

    #[error("fixed interpretation for unknown symbol '{0}'")]
    UnknownFixedSymbol(String),

    #[error("exhaustive order sweep limited to n <= 5, got n = {0}")]
    ExhaustiveTooLarge(usize),

    #[error("tasks compare different universe sizes: {0} vs {1}")]
    SizeMismatch(usize, usize),
}

/// How the order slot of the structure is interpreted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountMode {
    Unordered,
    OrderedNatural,
    /// Elements listed from least to greatest.
    OrderedWith(Vec<u32>),
}

/// One counting problem: a sentence, a universe size, an order mode, and
/// fixed interpretations for the non-counted symbols.
#[derive(Debug, Clone)]
pub struct CountTask<'a> {
    pub vocab: &'a Vocabulary,
    pub phi: &'a Formula,
    pub n: usize,
    pub mode: CountMode,
    pub fixed: BTreeMap<String, Vec<Vec<u32>>>,
    pub budget: u64,
}

impl<'a> CountTask<'a> {
    pub fn new(vocab: &'a Vocabulary, phi: &'a Formula, n: usize) -> Self {
        CountTask {
            vocab,
            phi,
            n,
            mode: CountMode::Unordered,
            fixed: BTreeMap::new(),
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn ordered_natural(mut self) -> Self {
        self.mode = CountMode::OrderedNatural;
        self
    }

    pub fn ordered_with(mut self, seq: Vec<u32>) -> Self {
        self.mode = CountMode::OrderedWith(seq);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_fixed(mut self, symbol: &str, tuples: Vec<Vec<u32>>) -> Self {
        self.fixed.insert(symbol.to_string(), tuples);
        self
    }
}

/// Exact number of counted-symbol interpretations on `[n]` satisfying the
/// sentence.
pub fn specker_count(task: &CountTask) -> Result<BigUint, CountError> {
    let prepared = Prepared::build(task)?;
    prepared.count()
}

/// Count with an explicit order (a permutation of `[n]` given least to
/// greatest).
pub fn ordered_specker_count(task: &CountTask, order: &[u32]) -> Result<BigUint, CountError> {
    let mut t = task.clone();
    t.mode = CountMode::OrderedWith(order.to_vec());
    specker_count(&t)
}

/// `specker_count(f1) - specker_count(f2)` as a signed integer.
pub fn diff_specker_eval(t1: &CountTask, t2: &CountTask) -> Result<BigInt, CountError> {
    if t1.n != t2.n {
        return Err(CountError::SizeMismatch(t1.n, t2.n));
    }
    let a = specker_count(t1)?;
    let b = specker_count(t2)?;
    Ok(BigInt::from(a) - BigInt::from(b))
}

struct Prepared {
    n: usize,
    ranks: Option<Vec<u32>>,
    relations: Vec<Relation>,
    /// (vocab symbol index, mask bits) per counted symbol, declaration order
    counted: Vec<(usize, u32)>,
    /// conjuncts scheduled at each counted level
    by_level: Vec<Vec<CompiledFormula>>,
    pre: Vec<CompiledFormula>,
    /// highest level with a conjunct, or None
    max_level: Option<usize>,
    /// total free bits from level k onward
    free_bits_from: Vec<u64>,
    budget: u64,
}

impl Prepared {
    fn build(task: &CountTask) -> Result<Self, CountError> {
        task.phi.well_formed(task.vocab, &[])?;
        if task.phi.uses_lt() && task.mode == CountMode::Unordered {
            return Err(CountError::OrderedFormulaUnorderedTask);
        }
        let ranks = match &task.mode {
            CountMode::Unordered => None,
            CountMode::OrderedNatural => Some((1..=task.n as u32).collect()),
            CountMode::OrderedWith(seq) => Some(crate::logic::sequence_to_ranks(seq, task.n)?),
        };

        for name in task.fixed.keys() {
            if task.vocab.symbol(name).is_none() {
                return Err(CountError::UnknownFixedSymbol(name.clone()));
            }
        }
        // base relations: empty for counted, fixed (or empty) otherwise
        let mut relations = Vec::with_capacity(task.vocab.symbols().len());
        for decl in task.vocab.symbols() {
            let rel = match task.fixed.get(&decl.name) {
                Some(tuples) => {
                    if decl.counted {
                        return Err(CountError::FixedSymbolIsCounted(decl.name.clone()));
                    }
                    Relation::from_tuples(decl.arity, task.n, tuples)?
                }
                None => Relation::empty(decl.arity, task.n),
            };
            relations.push(rel);
        }

        let mut counted = Vec::new();
        for (idx, decl) in task.vocab.symbols().iter().enumerate() {
            if decl.counted {
                let bits = (task.n as u64).checked_pow(decl.arity as u32);
                match bits {
                    Some(b) if b <= 62 => counted.push((idx, b as u32)),
                    _ => {
                        return Err(CountError::SpaceTooLarge {
                            symbol: decl.name.clone(),
                            bits: bits.unwrap_or(u64::MAX),
                        })
                    }
                }
            }
        }

        // schedule top-level conjuncts by the last counted symbol they mention
        let conjuncts = flatten_conjunction(task.phi);
        let env = Env::default();
        let mut by_level: Vec<Vec<CompiledFormula>> =
            (0..counted.len()).map(|_| Vec::new()).collect();
        let mut pre = Vec::new();
        let mut max_level = None;
        for c in conjuncts {
            let compiled = CompiledFormula::build(c, task.vocab, &env)?;
            if compiled.uses_set_quantifier() && task.n > 63 {
                return Err(CountError::Logic(LogicError::UniverseTooLarge(task.n)));
            }
            let level = c
                .symbols_used()
                .iter()
                .filter_map(|s| task.vocab.symbol_index(s))
                .filter_map(|idx| counted.iter().position(|&(i, _)| i == idx))
                .max();
            match level {
                Some(l) => {
                    max_level = Some(max_level.map_or(l, |m: usize| m.max(l)));
                    by_level[l].push(compiled);
                }
                None => pre.push(compiled),
            }
        }

        let mut free_bits_from = vec![0u64; counted.len() + 1];
        for k in (0..counted.len()).rev() {
            free_bits_from[k] = free_bits_from[k + 1] + counted[k].1 as u64;
        }

        Ok(Prepared {
            n: task.n,
            ranks,
            relations,
            counted,
            by_level,
            pre,
            max_level,
            free_bits_from,
            budget: task.budget,
        })
    }

    fn count(&self) -> Result<BigUint, CountError> {
        // conjuncts with no counted symbols decide everything up front
        {
            let ctx = crate::logic::eval_context(self.n, self.ranks.as_deref(), &self.relations);
            if !self.pre.iter().all(|c| c.eval_ctx(&ctx, &[], &[])) {
                return Ok(BigUint::zero());
            }
        }
        let Some(max_level) = self.max_level else {
            // nothing constrains the counted symbols
            return Ok(BigUint::one() << self.free_bits_from[0]);
        };
        let bits0 = self.counted[0].1;
        let total_masks: u64 = 1 << bits0;
        let visited = AtomicU64::new(0);

        // fixed chunking keeps partial sums independent of worker count
        let chunk: u64 = (total_masks / 1024).max(1);
        let starts: Vec<u64> = (0..total_masks).step_by(chunk as usize).collect();

        let run_chunk = |start: u64| -> Result<BigUint, CountError> {
            let mut worker = Worker {
                prep: self,
                relations: self.relations.clone(),
                local_visited: 0,
                visited: &visited,
                max_level,
            };
            let end = (start + chunk).min(total_masks);
            let mut acc = BigUint::zero();
            for mask in start..end {
                acc += worker.descend(0, mask)?;
            }
            worker.flush();
            Ok(acc)
        };

        #[cfg(feature = "parallel")]
        let result: Result<BigUint, CountError> = {
            use rayon::prelude::*;
            starts
                .par_iter()
                .map(|&s| run_chunk(s))
                .try_reduce(BigUint::zero, |a, b| Ok(a + b))
        };
        #[cfg(not(feature = "parallel"))]
        let result: Result<BigUint, CountError> = {
            let mut acc = BigUint::zero();
            for &s in &starts {
                acc += run_chunk(s)?;
            }
            Ok(acc)
        };

        let total = result?;
        if visited.load(Ordering::Relaxed) > self.budget {
            return Err(CountError::BudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(total)
    }
}

struct Worker<'a> {
    prep: &'a Prepared,
    relations: Vec<Relation>,
    local_visited: u64,
    visited: &'a AtomicU64,
    max_level: usize,
}

impl Worker<'_> {
    fn flush(&mut self) {
        if self.local_visited > 0 {
            self.visited
                .fetch_add(self.local_visited, Ordering::Relaxed);
            self.local_visited = 0;
        }
    }

    fn step(&mut self) -> Result<(), CountError> {
        self.local_visited += 1;
        if self.local_visited >= 8192 {
            self.flush();
            if self.visited.load(Ordering::Relaxed) > self.prep.budget {
                return Err(CountError::BudgetExceeded {
                    budget: self.prep.budget,
                });
            }
        }
        Ok(())
    }

    /// Assign `mask` to the symbol at `level`, check the conjuncts that just
    /// became decidable, and recurse or shortcut.
    fn descend(&mut self, level: usize, mask: u64) -> Result<BigUint, CountError> {
        self.step()?;
        let (sym, _) = self.prep.counted[level];
        self.relations[sym].set_mask(mask);
        {
            let ctx =
                crate::logic::eval_context(self.prep.n, self.prep.ranks.as_deref(), &self.relations);
            if !self.prep.by_level[level]
                .iter()
                .all(|c| c.eval_ctx(&ctx, &[], &[]))
            {
                return Ok(BigUint::zero());
            }
        }
        if level == self.max_level {
            // remaining symbols are unconstrained
            return Ok(BigUint::one() << self.prep.free_bits_from[level + 1]);
        }
        let bits = self.prep.counted[level + 1].1;
        let mut acc = BigUint::zero();
        for m in 0..(1u64 << bits) {
            acc += self.descend(level + 1, m)?;
        }
        Ok(acc)
    }
}

fn flatten_conjunction(phi: &Formula) -> Vec<&Formula> {
    fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
        match f {
            Formula::And(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            other => out.push(other),
        }
    }
    let mut out = Vec::new();
    walk(phi, &mut out);
    out
}

/// Which orders a c.o.i. sweep visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoiStrategy {
    /// All `n!` orders (only for n <= 5).
    Exhaustive,
    /// A fixed number of seeded Fisher-Yates draws.
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum CoiVerdict {
    Invariant,
    /// Indices into the report's count list whose counts differ.
    Violated { first: usize, second: usize },
}

/// Outcome of a counting-order-invariance sweep.
#[derive(Debug, Clone)]
pub struct CoiReport {
    pub n: usize,
    pub strategy: CoiStrategy,
    /// (order id, order as least-to-greatest element sequence, count)
    pub counts: Vec<(usize, Vec<u32>, BigUint)>,
    pub verdict: CoiVerdict,
}

/// Count under many orders and compare. The verdict is `Invariant` iff all
/// recorded counts are equal. Sentences that never mention `<` are swept
/// all the same; their counts are order-independent by construction.
pub fn check_coi(task: &CountTask, strategy: CoiStrategy) -> Result<CoiReport, CountError> {
    let orders: Vec<Vec<u32>> = match &strategy {
        CoiStrategy::Exhaustive => {
            if task.n > 5 {
                return Err(CountError::ExhaustiveTooLarge(task.n));
            }
            permutations(task.n)
        }
        CoiStrategy::Sampled { seed } => {
            let mut rng = SplitMix64::new(*seed);
            (0..SAMPLED_ORDERS)
                .map(|_| {
                    let mut seq: Vec<u32> = (1..=task.n as u32).collect();
                    rng.shuffle(&mut seq);
                    seq
                })
                .collect()
        }
    };

    let count_for = |seq: &Vec<u32>| -> Result<BigUint, CountError> {
        ordered_specker_count(task, seq)
    };

    #[cfg(feature = "parallel")]
    let counts: Result<Vec<BigUint>, CountError> = {
        use rayon::prelude::*;
        orders.par_iter().map(count_for).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let counts: Result<Vec<BigUint>, CountError> = orders.iter().map(count_for).collect();
    let counts = counts?;

    let mut verdict = CoiVerdict::Invariant;
    for i in 1..counts.len() {
        if counts[i] != counts[0] {
            verdict = CoiVerdict::Violated {
                first: 0,
                second: i,
            };
            break;
        }
    }
    Ok(CoiReport {
        n: task.n,
        strategy,
        counts: orders
            .into_iter()
            .enumerate()
            .zip(counts)
            .map(|((i, o), c)| (i, o, c))
            .collect(),
        verdict,
    })
}

/// Serializable form of a [`CoiReport`] with counts as decimal strings.
#[derive(Debug, Clone, Serialize)]
pub struct CoiReportJson {
    pub n: usize,
    pub strategy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub orders_checked: usize,
    pub verdict: CoiVerdict,
    pub counts: Vec<CoiOrderCount>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoiOrderCount {
    pub order_id: usize,
    pub order: Vec<u32>,
    pub count: String,
}

impl CoiReport {
    pub fn to_json_struct(&self) -> CoiReportJson {
        CoiReportJson {
            n: self.n,
            strategy: match self.strategy {
                CoiStrategy::Exhaustive => "exhaustive".into(),
                CoiStrategy::Sampled { .. } => "sampled".into(),
            },
            seed: match self.strategy {
                CoiStrategy::Sampled { seed } => Some(seed),
                _ => None,
            },
            orders_checked: self.counts.len(),
            verdict: self.verdict.clone(),
            counts: self
                .counts
                .iter()
                .map(|(id, order, c)| CoiOrderCount {
                    order_id: *id,
                    order: order.clone(),
                    count: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn is_invariant(&self) -> bool {
        self.verdict == CoiVerdict::Invariant
    }
}
