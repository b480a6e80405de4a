use super::{LogicError, Vocabulary};
use std::fmt;

/// Abstract syntax of MSOL/CMSOL sentences. Individual variables are
/// lowercase identifiers, set variables are capitalized identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    /// "the number of elements x satisfying the body is `residue` mod `modulus`"
    CMod {
        residue: u32,
        modulus: u32,
        var: String,
        body: Box<Formula>,
    },
    Rel {
        symbol: String,
        terms: Vec<String>,
    },
    In {
        term: String,
        set: String,
    },
    Eq(String, String),
    Lt(String, String),
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn forall(v: &str, a: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(a))
    }
    pub fn exists(v: &str, a: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(a))
    }
    pub fn forall_set(v: &str, a: Formula) -> Formula {
        Formula::ForallSet(v.to_string(), Box::new(a))
    }
    pub fn exists_set(v: &str, a: Formula) -> Formula {
        Formula::ExistsSet(v.to_string(), Box::new(a))
    }
    pub fn cmod(residue: u32, modulus: u32, var: &str, body: Formula) -> Formula {
        Formula::CMod {
            residue,
            modulus,
            var: var.to_string(),
            body: Box::new(body),
        }
    }
    pub fn rel(symbol: &str, terms: &[&str]) -> Formula {
        Formula::Rel {
            symbol: symbol.to_string(),
            terms: terms.iter().map(|t| t.to_string()).collect(),
        }
    }
    pub fn member(term: &str, set: &str) -> Formula {
        Formula::In {
            term: term.to_string(),
            set: set.to_string(),
        }
    }
    pub fn eq(a: &str, b: &str) -> Formula {
        Formula::Eq(a.to_string(), b.to_string())
    }
    pub fn lt(a: &str, b: &str) -> Formula {
        Formula::Lt(a.to_string(), b.to_string())
    }

    /// Conjunction of a list; empty list is `true`.
    pub fn conj(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::True,
            1 => fs.pop().unwrap(),
            _ => {
                let mut it = fs.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Formula::and)
            }
        }
    }

    /// Disjunction of a list; empty list is `false`.
    pub fn disj(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::False,
            1 => fs.pop().unwrap(),
            _ => {
                let mut it = fs.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Formula::or)
            }
        }
    }

    pub fn uses_lt(&self) -> bool {
        match self {
            Formula::Lt(_, _) => true,
            Formula::True | Formula::False | Formula::Rel { .. } | Formula::In { .. } | Formula::Eq(_, _) => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.uses_lt() || b.uses_lt()
            }
            Formula::Not(a) => a.uses_lt(),
            Formula::Forall(_, a)
            | Formula::Exists(_, a)
            | Formula::ForallSet(_, a)
            | Formula::ExistsSet(_, a) => a.uses_lt(),
            Formula::CMod { body, .. } => body.uses_lt(),
        }
    }

    pub fn uses_cmod(&self) -> bool {
        match self {
            Formula::CMod { .. } => true,
            Formula::True | Formula::False | Formula::Rel { .. } | Formula::In { .. } | Formula::Eq(_, _) | Formula::Lt(_, _) => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.uses_cmod() || b.uses_cmod()
            }
            Formula::Not(a) => a.uses_cmod(),
            Formula::Forall(_, a)
            | Formula::Exists(_, a)
            | Formula::ForallSet(_, a)
            | Formula::ExistsSet(_, a) => a.uses_cmod(),
        }
    }

    pub fn uses_set_quantifier(&self) -> bool {
        match self {
            Formula::ForallSet(_, _) | Formula::ExistsSet(_, _) => true,
            Formula::True | Formula::False | Formula::Rel { .. } | Formula::In { .. } | Formula::Eq(_, _) | Formula::Lt(_, _) => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.uses_set_quantifier() || b.uses_set_quantifier()
            }
            Formula::Not(a) => a.uses_set_quantifier(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.uses_set_quantifier(),
            Formula::CMod { body, .. } => body.uses_set_quantifier(),
        }
    }

    /// Relation symbols occurring in the formula, in first-occurrence order.
    pub fn symbols_used(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Vec<String>) {
        match self {
            Formula::Rel { symbol, .. } => {
                if !out.contains(symbol) {
                    out.push(symbol.clone());
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Formula::Not(a)
            | Formula::Forall(_, a)
            | Formula::Exists(_, a)
            | Formula::ForallSet(_, a)
            | Formula::ExistsSet(_, a) => a.collect_symbols(out),
            Formula::CMod { body, .. } => body.collect_symbols(out),
            _ => {}
        }
    }

    /// Check well-formedness against a vocabulary: every relation atom uses a
    /// declared symbol with matching arity, modular quantifier parameters are
    /// in range, and (unless `free` lists them) no variables occur free.
    pub fn well_formed(&self, vocab: &Vocabulary, free: &[&str]) -> Result<(), LogicError> {
        let mut scope: Vec<String> = free.iter().map(|s| s.to_string()).collect();
        self.check(vocab, &mut scope)
    }

    fn check(&self, vocab: &Vocabulary, scope: &mut Vec<String>) -> Result<(), LogicError> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.check(vocab, scope)?;
                b.check(vocab, scope)
            }
            Formula::Not(a) => a.check(vocab, scope),
            Formula::Forall(v, a)
            | Formula::Exists(v, a)
            | Formula::ForallSet(v, a)
            | Formula::ExistsSet(v, a) => {
                scope.push(v.clone());
                let r = a.check(vocab, scope);
                scope.pop();
                r
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
                scope.push(var.clone());
                let r = body.check(vocab, scope);
                scope.pop();
                r
            }
            Formula::Rel { symbol, terms } => {
                let decl = vocab
                    .symbol(symbol)
                    .ok_or_else(|| LogicError::UnknownSymbol(symbol.clone()))?;
                if decl.arity != terms.len() {
                    return Err(LogicError::ArityMismatch {
                        symbol: symbol.clone(),
                        expected: decl.arity,
                        got: terms.len(),
                    });
                }
                for t in terms {
                    if !scope.contains(t) {
                        return Err(LogicError::UnboundVariable(t.clone()));
                    }
                }
                Ok(())
            }
            Formula::In { term, set } => {
                if !scope.contains(term) {
                    return Err(LogicError::UnboundVariable(term.clone()));
                }
                if !scope.contains(set) {
                    return Err(LogicError::UnboundVariable(set.clone()));
                }
                Ok(())
            }
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                for t in [a, b] {
                    if !scope.contains(t) {
                        return Err(LogicError::UnboundVariable(t.clone()));
                    }
                }
                Ok(())
            }
        }
    }

    /// Canonical S-expression text; `parse_formula` inverts this.
    pub fn to_sexpr(&self) -> String {
        let mut s = String::new();
        self.write_sexpr(&mut s);
        s
    }

    fn write_sexpr(&self, out: &mut String) {
        match self {
            Formula::True => out.push_str("true"),
            Formula::False => out.push_str("false"),
            Formula::And(a, b) => binary(out, "and", a, b),
            Formula::Or(a, b) => binary(out, "or", a, b),
            Formula::Implies(a, b) => binary(out, "implies", a, b),
            Formula::Not(a) => {
                out.push_str("(not ");
                a.write_sexpr(out);
                out.push(')');
            }
            Formula::Forall(v, a) => quantifier(out, "forall", v, a),
            Formula::Exists(v, a) => quantifier(out, "exists", v, a),
            Formula::ForallSet(v, a) => quantifier(out, "forall-set", v, a),
            Formula::ExistsSet(v, a) => quantifier(out, "exists-set", v, a),
            Formula::CMod {
                residue,
                modulus,
                var,
                body,
            } => {
                out.push_str(&format!("(cmod {residue} {modulus} {var} "));
                body.write_sexpr(out);
                out.push(')');
            }
            Formula::Rel { symbol, terms } => {
                out.push_str("(rel ");
                out.push_str(symbol);
                for t in terms {
                    out.push(' ');
                    out.push_str(t);
                }
                out.push(')');
            }
            Formula::In { term, set } => out.push_str(&format!("(in {term} {set})")),
            Formula::Eq(a, b) => out.push_str(&format!("(= {a} {b})")),
            Formula::Lt(a, b) => out.push_str(&format!("(< {a} {b})")),
        }
    }
}

fn binary(out: &mut String, op: &str, a: &Formula, b: &Formula) {
    out.push('(');
    out.push_str(op);
    out.push(' ');
    a.write_sexpr(out);
    out.push(' ');
    b.write_sexpr(out);
    out.push(')');
}

fn quantifier(out: &mut String, op: &str, v: &str, a: &Formula) {
    out.push('(');
    out.push_str(op);
    out.push(' ');
    out.push_str(v);
    out.push(' ');
    a.write_sexpr(out);
    out.push(')');
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

/// Logical fragments ordered by expressive power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum Fragment {
    Fol,
    Msol,
    Cmsol,
}

/// The least fragment containing all constructs actually used, plus the
/// ordered flag and the maximal arity of occurring symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct FragmentTag {
    pub fragment: Fragment,
    pub ordered: bool,
    pub max_arity: usize,
}

pub fn classify_fragment(phi: &Formula, vocab: &Vocabulary) -> FragmentTag {
    let fragment = if phi.uses_cmod() {
        Fragment::Cmsol
    } else if phi.uses_set_quantifier() {
        Fragment::Msol
    } else {
        Fragment::Fol
    };
    // set quantification is monadic: it contributes arity one even when no
    // relation symbol occurs
    let floor = usize::from(phi.uses_set_quantifier());
    let max_arity = phi
        .symbols_used()
        .iter()
        .filter_map(|s| vocab.symbol(s).map(|d| d.arity))
        .max()
        .unwrap_or(0)
        .max(floor);
    FragmentTag {
        fragment,
        ordered: phi.uses_lt(),
        max_arity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::from_triples(&[("E", 2, true)])
    }

    #[test]
    fn classify_fol_msol_cmsol() {
        let v = vocab();
        let fol = Formula::forall("x", Formula::rel("E", &["x", "x"]));
        assert_eq!(
            classify_fragment(&fol, &v),
            FragmentTag {
                fragment: Fragment::Fol,
                ordered: false,
                max_arity: 2
            }
        );

        let msol = Formula::exists_set("U", Formula::forall("x", Formula::member("x", "U")));
        let tag = classify_fragment(&msol, &v);
        assert_eq!(tag.fragment, Fragment::Msol);
        assert!(!tag.ordered);
        assert_eq!(tag.max_arity, 1);

        // all vertex degrees even: the modular quantifier makes this CMSOL
        let eulerian_degrees = Formula::forall(
            "x",
            Formula::cmod(0, 2, "y", Formula::rel("E", &["x", "y"])),
        );
        let tag = classify_fragment(&eulerian_degrees, &v);
        assert_eq!(tag.fragment, Fragment::Cmsol);
        assert!(!tag.ordered);
        assert_eq!(tag.max_arity, 2);
    }

    #[test]
    fn well_formed_catches_arity_and_scope() {
        let v = vocab();
        let bad = Formula::forall("x", Formula::rel("E", &["x"]));
        assert!(matches!(
            bad.well_formed(&v, &[]),
            Err(LogicError::ArityMismatch { .. })
        ));
        let unbound = Formula::rel("E", &["x", "x"]);
        assert!(matches!(
            unbound.well_formed(&v, &[]),
            Err(LogicError::UnboundVariable(_))
        ));
        assert!(unbound.well_formed(&v, &["x"]).is_ok());
        let badmod = Formula::cmod(2, 2, "x", Formula::True);
        assert!(matches!(
            badmod.well_formed(&v, &[]),
            Err(LogicError::BadModQuantifier { .. })
        ));
    }
}
