use super::LogicError;
use serde::{Deserialize, Serialize};

/// A relation symbol declaration. Counted symbols are the free relations
/// whose interpretations are enumerated when counting models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolDecl {
    pub name: String,
    pub arity: usize,
    pub counted: bool,
}

/// A finite set of relation symbols with arities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    symbols: Vec<SymbolDecl>,
}

impl Vocabulary {
    pub fn new(symbols: Vec<SymbolDecl>) -> Result<Self, LogicError> {
        for (i, s) in symbols.iter().enumerate() {
            if s.arity == 0 {
                return Err(LogicError::ZeroArity(s.name.clone()));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(LogicError::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Vocabulary { symbols })
    }

    /// Convenience constructor from `(name, arity, counted)` triples.
    pub fn from_triples(triples: &[(&str, usize, bool)]) -> Self {
        Vocabulary::new(
            triples
                .iter()
                .map(|&(name, arity, counted)| SymbolDecl {
                    name: name.to_string(),
                    arity,
                    counted,
                })
                .collect(),
        )
        .expect("static vocabulary must be well-formed")
    }

    pub fn symbols(&self) -> &[SymbolDecl] {
        &self.symbols
    }

    pub fn symbol(&self, name: &str) -> Option<&SymbolDecl> {
        self.symbols.iter().find(|s| s.name == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Counted symbols in declaration order.
    pub fn counted(&self) -> impl Iterator<Item = &SymbolDecl> {
        self.symbols.iter().filter(|s| s.counted)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let raw: Vocabulary = serde_json::from_str(text)?;
        Ok(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("vocabulary serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_zero_arity() {
        assert!(matches!(
            Vocabulary::new(vec![
                SymbolDecl { name: "E".into(), arity: 2, counted: true },
                SymbolDecl { name: "E".into(), arity: 1, counted: false },
            ]),
            Err(LogicError::DuplicateSymbol(_))
        ));
        assert!(matches!(
            Vocabulary::new(vec![SymbolDecl {
                name: "Z".into(),
                arity: 0,
                counted: false
            }]),
            Err(LogicError::ZeroArity(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let v = Vocabulary::from_triples(&[("E", 2, true), ("P", 1, false)]);
        let j = v.to_json();
        assert_eq!(Vocabulary::from_json(&j).unwrap(), v);
        // zero counted symbols is allowed
        let w = Vocabulary::from_triples(&[("P", 1, false)]);
        assert_eq!(w.counted().count(), 0);
    }
}
