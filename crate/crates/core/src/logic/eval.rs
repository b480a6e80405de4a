use super::{Formula, LogicError, Relation, Structure, Vocabulary};

/// Assignment of the free variables of a formula.
#[derive(Debug, Clone, Default)]
pub struct Env {
    /// individual variable name -> element of `[n]`
    pub individuals: Vec<(String, u32)>,
    /// set variable name -> subset of `[n]` as a bitmask (bit `e-1` for element `e`)
    pub sets: Vec<(String, u64)>,
}

impl Env {
    pub fn with_individual(name: &str, value: u32) -> Env {
        Env {
            individuals: vec![(name.to_string(), value)],
            sets: Vec::new(),
        }
    }
}

/// Tarski semantics over a finite structure. Set quantifiers range over all
/// `2^n` subsets in increasing binary-mask order; the modular quantifier
/// counts witnesses directly.
pub fn evaluate(
    phi: &Formula,
    vocab: &Vocabulary,
    structure: &Structure,
    env: &Env,
) -> Result<bool, LogicError> {
    let compiled = CompiledFormula::build(phi, vocab, env)?;
    compiled.eval(vocab, structure, env)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SlotKind {
    Individual,
    Set,
}

/// A formula resolved against a vocabulary: symbol names become indices into
/// the vocabulary's declaration order and variables become stack slots, so
/// the hot evaluation loop does no name lookups.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    node: Node,
    free_individuals: Vec<String>,
    free_sets: Vec<String>,
    uses_lt: bool,
    uses_set_quant: bool,
}

/// Everything evaluation needs, with relations positioned by vocabulary
/// symbol index.
pub(crate) struct EvalContext<'a> {
    pub n: usize,
    pub ranks: Option<&'a [u32]>,
    pub relations: &'a [Relation],
}

#[derive(Debug, Clone)]
enum Node {
    True,
    False,
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Not(Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Forall(Box<Node>),
    Exists(Box<Node>),
    ForallSet(Box<Node>),
    ExistsSet(Box<Node>),
    CMod {
        residue: u32,
        modulus: u32,
        body: Box<Node>,
    },
    Rel {
        symbol: usize,
        slots: Vec<usize>,
    },
    In {
        term: usize,
        set: usize,
    },
    Eq(usize, usize),
    Lt(usize, usize),
}

impl CompiledFormula {
    /// Resolve names. Free variables must be present in `env` (this
    /// determines their slots); everything else is checked as in
    /// `Formula::well_formed`.
    pub fn build(phi: &Formula, vocab: &Vocabulary, env: &Env) -> Result<Self, LogicError> {
        let free_individuals: Vec<String> =
            env.individuals.iter().map(|(n, _)| n.clone()).collect();
        let free_sets: Vec<String> = env.sets.iter().map(|(n, _)| n.clone()).collect();
        let mut scope: Vec<(String, SlotKind)> = free_individuals
            .iter()
            .map(|n| (n.clone(), SlotKind::Individual))
            .chain(free_sets.iter().map(|n| (n.clone(), SlotKind::Set)))
            .collect();
        let node = compile(phi, vocab, &mut scope)?;
        let (ind_depth, set_depth) = depths(&node);
        assert!(
            free_individuals.len() + ind_depth <= MAX_IND_DEPTH
                && free_sets.len() + set_depth <= MAX_SET_DEPTH,
            "quantifier nesting exceeds the evaluator's fixed stack"
        );
        Ok(CompiledFormula {
            node,
            free_individuals,
            free_sets,
            uses_lt: phi.uses_lt(),
            uses_set_quant: phi.uses_set_quantifier(),
        })
    }

    pub fn eval(
        &self,
        vocab: &Vocabulary,
        structure: &Structure,
        env: &Env,
    ) -> Result<bool, LogicError> {
        if self.uses_lt && !structure.has_order() {
            return Err(LogicError::MissingOrder);
        }
        if self.uses_set_quant && structure.n() > 63 {
            return Err(LogicError::UniverseTooLarge(structure.n()));
        }
        let relations: Vec<Relation> = vocab
            .symbols()
            .iter()
            .map(|d| {
                structure
                    .relation(&d.name)
                    .cloned()
                    .unwrap_or_else(|| Relation::empty(d.arity, structure.n()))
            })
            .collect();
        let ctx = EvalContext {
            n: structure.n(),
            ranks: structure.order_ranks(),
            relations: &relations,
        };
        let mut individuals = Vec::with_capacity(self.free_individuals.len() + 4);
        for name in &self.free_individuals {
            let v = env
                .individuals
                .iter()
                .find(|(n, _)| n == name)
                .ok_or_else(|| LogicError::MissingAssignment(name.clone()))?
                .1;
            individuals.push(v);
        }
        let mut sets = Vec::with_capacity(self.free_sets.len() + 2);
        for name in &self.free_sets {
            let v = env
                .sets
                .iter()
                .find(|(n, _)| n == name)
                .ok_or_else(|| LogicError::MissingAssignment(name.clone()))?
                .1;
            sets.push(v);
        }
        Ok(self.eval_ctx(&ctx, &individuals, &sets))
    }

    /// Fast path: caller has already validated order/universe preconditions
    /// and supplies free-variable values positionally. Quantifier nesting is
    /// bounded by the fixed VM stack (16 individual, 8 set variables).
    pub(crate) fn eval_ctx(&self, ctx: &EvalContext, ind: &[u32], sets: &[u64]) -> bool {
        let mut vm = Vm {
            ctx,
            individuals: [0; MAX_IND_DEPTH],
            ind_len: ind.len(),
            sets: [0; MAX_SET_DEPTH],
            set_len: sets.len(),
        };
        vm.individuals[..ind.len()].copy_from_slice(ind);
        vm.sets[..sets.len()].copy_from_slice(sets);
        vm.eval(&self.node)
    }

    pub(crate) fn uses_set_quantifier(&self) -> bool {
        self.uses_set_quant
    }
}

fn compile(
    phi: &Formula,
    vocab: &Vocabulary,
    scope: &mut Vec<(String, SlotKind)>,
) -> Result<Node, LogicError> {
    Ok(match phi {
        Formula::True => Node::True,
        Formula::False => Node::False,
        Formula::And(a, b) => Node::And(
            Box::new(compile(a, vocab, scope)?),
            Box::new(compile(b, vocab, scope)?),
        ),
        Formula::Or(a, b) => Node::Or(
            Box::new(compile(a, vocab, scope)?),
            Box::new(compile(b, vocab, scope)?),
        ),
        Formula::Implies(a, b) => Node::Implies(
            Box::new(compile(a, vocab, scope)?),
            Box::new(compile(b, vocab, scope)?),
        ),
        Formula::Not(a) => Node::Not(Box::new(compile(a, vocab, scope)?)),
        Formula::Forall(v, a) => {
            scope.push((v.clone(), SlotKind::Individual));
            let body = compile(a, vocab, scope);
            scope.pop();
            Node::Forall(Box::new(body?))
        }
        Formula::Exists(v, a) => {
            scope.push((v.clone(), SlotKind::Individual));
            let body = compile(a, vocab, scope);
            scope.pop();
            Node::Exists(Box::new(body?))
        }
        Formula::ForallSet(v, a) => {
            scope.push((v.clone(), SlotKind::Set));
            let body = compile(a, vocab, scope);
            scope.pop();
            Node::ForallSet(Box::new(body?))
        }
        Formula::ExistsSet(v, a) => {
            scope.push((v.clone(), SlotKind::Set));
            let body = compile(a, vocab, scope);
            scope.pop();
            Node::ExistsSet(Box::new(body?))
        }
        Formula::CMod {
            residue,
            modulus,
            var,
            body,
        } => {
            if *modulus < 2 || residue >= modulus {
                return Err(LogicError::BadModQuantifier {
                    residue: *residue,
                    modulus: *modulus,
                });
            }
            scope.push((var.clone(), SlotKind::Individual));
            let b = compile(body, vocab, scope);
            scope.pop();
            Node::CMod {
                residue: *residue,
                modulus: *modulus,
                body: Box::new(b?),
            }
        }
        Formula::Rel { symbol, terms } => {
            let idx = vocab
                .symbol_index(symbol)
                .ok_or_else(|| LogicError::UnknownSymbol(symbol.clone()))?;
            let decl = &vocab.symbols()[idx];
            if decl.arity != terms.len() {
                return Err(LogicError::ArityMismatch {
                    symbol: symbol.clone(),
                    expected: decl.arity,
                    got: terms.len(),
                });
            }
            let slots = terms
                .iter()
                .map(|t| lookup(scope, t, SlotKind::Individual))
                .collect::<Result<Vec<_>, _>>()?;
            Node::Rel { symbol: idx, slots }
        }
        Formula::In { term, set } => Node::In {
            term: lookup(scope, term, SlotKind::Individual)?,
            set: lookup(scope, set, SlotKind::Set)?,
        },
        Formula::Eq(a, b) => Node::Eq(
            lookup(scope, a, SlotKind::Individual)?,
            lookup(scope, b, SlotKind::Individual)?,
        ),
        Formula::Lt(a, b) => Node::Lt(
            lookup(scope, a, SlotKind::Individual)?,
            lookup(scope, b, SlotKind::Individual)?,
        ),
    })
}

/// Maximum quantifier nesting per variable kind.
fn depths(node: &Node) -> (usize, usize) {
    match node {
        Node::True | Node::False | Node::Rel { .. } | Node::In { .. } | Node::Eq(_, _) | Node::Lt(_, _) => (0, 0),
        Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => {
            let (i1, s1) = depths(a);
            let (i2, s2) = depths(b);
            (i1.max(i2), s1.max(s2))
        }
        Node::Not(a) => depths(a),
        Node::Forall(a) | Node::Exists(a) | Node::CMod { body: a, .. } => {
            let (i, s) = depths(a);
            (i + 1, s)
        }
        Node::ForallSet(a) | Node::ExistsSet(a) => {
            let (i, s) = depths(a);
            (i, s + 1)
        }
    }
}

/// Resolve a variable to the innermost binding of the right kind, counting
/// slots within that kind only.
fn lookup(scope: &[(String, SlotKind)], name: &str, kind: SlotKind) -> Result<usize, LogicError> {
    let mut slot = None;
    let mut idx = 0usize;
    for (n, k) in scope {
        if *k == kind {
            if n == name {
                slot = Some(idx);
            }
            idx += 1;
        } else if n == name {
            slot = None;
        }
    }
    slot.ok_or_else(|| LogicError::UnboundVariable(name.to_string()))
}

const MAX_IND_DEPTH: usize = 16;
const MAX_SET_DEPTH: usize = 8;

struct Vm<'a, 'b> {
    ctx: &'b EvalContext<'a>,
    individuals: [u32; MAX_IND_DEPTH],
    ind_len: usize,
    sets: [u64; MAX_SET_DEPTH],
    set_len: usize,
}

impl Vm<'_, '_> {
    fn eval(&mut self, node: &Node) -> bool {
        match node {
            Node::True => true,
            Node::False => false,
            Node::And(a, b) => self.eval(a) && self.eval(b),
            Node::Or(a, b) => self.eval(a) || self.eval(b),
            Node::Implies(a, b) => !self.eval(a) || self.eval(b),
            Node::Not(a) => !self.eval(a),
            Node::Forall(body) => {
                let n = self.ctx.n as u32;
                let slot = self.ind_len;
                self.ind_len += 1;
                let mut ok = true;
                for v in 1..=n {
                    self.individuals[slot] = v;
                    if !self.eval(body) {
                        ok = false;
                        break;
                    }
                }
                self.ind_len -= 1;
                ok
            }
            Node::Exists(body) => {
                let n = self.ctx.n as u32;
                let slot = self.ind_len;
                self.ind_len += 1;
                let mut ok = false;
                for v in 1..=n {
                    self.individuals[slot] = v;
                    if self.eval(body) {
                        ok = true;
                        break;
                    }
                }
                self.ind_len -= 1;
                ok
            }
            Node::ForallSet(body) => {
                let n = self.ctx.n;
                let slot = self.set_len;
                self.set_len += 1;
                let mut ok = true;
                for mask in 0..(1u64 << n) {
                    self.sets[slot] = mask;
                    if !self.eval(body) {
                        ok = false;
                        break;
                    }
                }
                self.set_len -= 1;
                ok
            }
            Node::ExistsSet(body) => {
                let n = self.ctx.n;
                let slot = self.set_len;
                self.set_len += 1;
                let mut ok = false;
                for mask in 0..(1u64 << n) {
                    self.sets[slot] = mask;
                    if self.eval(body) {
                        ok = true;
                        break;
                    }
                }
                self.set_len -= 1;
                ok
            }
            Node::CMod {
                residue,
                modulus,
                body,
            } => {
                let n = self.ctx.n as u32;
                let slot = self.ind_len;
                self.ind_len += 1;
                let mut count = 0u32;
                for v in 1..=n {
                    self.individuals[slot] = v;
                    if self.eval(body) {
                        count += 1;
                    }
                }
                self.ind_len -= 1;
                count % modulus == *residue
            }
            Node::Rel { symbol, slots } => {
                let mut tuple = [0u32; 8];
                debug_assert!(slots.len() <= 8);
                for (i, &s) in slots.iter().enumerate() {
                    tuple[i] = self.individuals[s];
                }
                self.ctx.relations[*symbol].contains(&tuple[..slots.len()])
            }
            Node::In { term, set } => {
                let e = self.individuals[*term];
                self.sets[*set] >> (e - 1) & 1 == 1
            }
            Node::Eq(a, b) => self.individuals[*a] == self.individuals[*b],
            Node::Lt(a, b) => {
                let ranks = self.ctx.ranks.expect("order checked before evaluation");
                let x = self.individuals[*a] as usize;
                let y = self.individuals[*b] as usize;
                ranks[x - 1] < ranks[y - 1]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn vocab() -> Vocabulary {
        Vocabulary::from_triples(&[("E", 2, true)])
    }

    fn structure_with(n: usize, edges: &[(u32, u32)]) -> Structure {
        let mut s = Structure::empty_for(&vocab(), n);
        let rel = s.relation_mut("E").unwrap();
        for &(a, b) in edges {
            rel.insert(&[a, b]);
        }
        s
    }

    #[test]
    fn reflexivity_on_identity_relation() {
        let phi = parse_formula("(forall x (rel E x x))", &vocab()).unwrap();
        let s = structure_with(3, &[(1, 1), (2, 2), (3, 3)]);
        assert!(evaluate(&phi, &vocab(), &s, &Env::default()).unwrap());
        let t = structure_with(3, &[(1, 1), (2, 2)]);
        assert!(!evaluate(&phi, &vocab(), &t, &Env::default()).unwrap());
    }

    #[test]
    fn even_universe_via_cmod() {
        let phi = parse_formula("(cmod 0 2 x true)", &vocab()).unwrap();
        for (n, expect) in [(4, true), (3, false), (0, true)] {
            let s = Structure::empty_for(&vocab(), n);
            assert_eq!(evaluate(&phi, &vocab(), &s, &Env::default()).unwrap(), expect);
        }
    }

    #[test]
    fn equivalence_axioms_hold_on_example() {
        // {1,2} merged, {3} singleton
        let s = structure_with(3, &[(1, 1), (2, 2), (3, 3), (1, 2), (2, 1)]);
        let axioms = "(and (and (forall x (rel E x x)) (forall x (forall y (implies (rel E x y) (rel E y x))))) (forall x (forall y (forall z (implies (and (rel E x y) (rel E y z)) (rel E x z))))))";
        let phi = parse_formula(axioms, &vocab()).unwrap();
        assert!(evaluate(&phi, &vocab(), &s, &Env::default()).unwrap());
        // breaking transitivity: add (2,3) without (1,3)
        let t = structure_with(3, &[(1, 1), (2, 2), (3, 3), (1, 2), (2, 1), (2, 3), (3, 2)]);
        assert!(!evaluate(&phi, &vocab(), &t, &Env::default()).unwrap());
    }

    #[test]
    fn missing_order_is_an_error() {
        let phi = parse_formula("(forall x (exists y (< x y)))", &vocab()).unwrap();
        let s = Structure::empty_for(&vocab(), 2);
        assert!(matches!(
            evaluate(&phi, &vocab(), &s, &Env::default()),
            Err(LogicError::MissingOrder)
        ));
    }

    #[test]
    fn free_variables_come_from_env() {
        let phi = Formula::rel("E", &["x", "y"]);
        let s = structure_with(2, &[(1, 2)]);
        let env = Env {
            individuals: vec![("x".into(), 1), ("y".into(), 2)],
            sets: vec![],
        };
        assert!(evaluate(&phi, &vocab(), &s, &env).unwrap());
        let env2 = Env::with_individual("x", 1);
        assert!(matches!(
            evaluate(&phi, &vocab(), &s, &env2),
            Err(LogicError::UnboundVariable(_)) | Err(LogicError::MissingAssignment(_))
        ));
    }

    #[test]
    fn n_zero_semantics() {
        let v = vocab();
        let s = Structure::empty_for(&v, 0);
        let all = parse_formula("(forall x false)", &v).unwrap();
        assert!(evaluate(&all, &v, &s, &Env::default()).unwrap());
        let some = parse_formula("(exists x true)", &v).unwrap();
        assert!(!evaluate(&some, &v, &s, &Env::default()).unwrap());
    }
}
