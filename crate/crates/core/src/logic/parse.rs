use super::{Formula, LogicError, Vocabulary};

/// Parse a sentence in the S-expression surface syntax and validate it
/// against the vocabulary. Free variables are rejected.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, LogicError> {
    parse_formula_with_free(text, vocab, &[])
}

/// Like [`parse_formula`] but allows the listed variables to occur free
/// (used for position predicates carrying one free element variable).
pub fn parse_formula_with_free(
    text: &str,
    vocab: &Vocabulary,
    free: &[&str],
) -> Result<Formula, LogicError> {
    let mut p = Parser::new(text);
    let phi = p.parse()?;
    p.expect_end()?;
    phi.well_formed(vocab, free)?;
    Ok(phi)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug)]
enum Token {
    LParen,
    RParen,
    Atom(String),
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> LogicError {
        LogicError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, LogicError> {
        self.skip_ws();
        match self.src.get(self.pos).copied() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.bump();
                Ok(Token::LParen)
            }
            Some(b')') => {
                self.bump();
                Ok(Token::RParen)
            }
            Some(_) => {
                let start = self.pos;
                while let Some(&c) = self.src.get(self.pos) {
                    if c.is_ascii_whitespace() || c == b'(' || c == b')' {
                        break;
                    }
                    self.bump();
                }
                Ok(Token::Atom(
                    String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                ))
            }
        }
    }

    fn expect_end(&mut self) -> Result<(), LogicError> {
        self.skip_ws();
        if self.pos != self.src.len() {
            Err(self.err("trailing input after formula"))
        } else {
            Ok(())
        }
    }

    fn expect_rparen(&mut self) -> Result<(), LogicError> {
        match self.next_token()? {
            Token::RParen => Ok(()),
            t => Err(self.err(format!("expected ')', got {t:?}"))),
        }
    }

    fn atom(&mut self) -> Result<String, LogicError> {
        match self.next_token()? {
            Token::Atom(a) => Ok(a),
            t => Err(self.err(format!("expected identifier, got {t:?}"))),
        }
    }

    fn individual_var(&mut self) -> Result<String, LogicError> {
        let a = self.atom()?;
        if !is_individual_var(&a) {
            return Err(self.err(format!(
                "'{a}' is not an individual variable (lowercase identifier)"
            )));
        }
        Ok(a)
    }

    fn set_var(&mut self) -> Result<String, LogicError> {
        let a = self.atom()?;
        if !is_set_var(&a) {
            return Err(self.err(format!(
                "'{a}' is not a set variable (capitalized identifier)"
            )));
        }
        Ok(a)
    }

    fn nat(&mut self) -> Result<u32, LogicError> {
        let a = self.atom()?;
        a.parse::<u32>()
            .map_err(|_| self.err(format!("expected a natural number, got '{a}'")))
    }

    fn parse(&mut self) -> Result<Formula, LogicError> {
        match self.next_token()? {
            Token::Atom(a) => match a.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                other => Err(self.err(format!("unexpected token '{other}'"))),
            },
            Token::RParen => Err(self.err("unexpected ')'")),
            Token::LParen => {
                let head = self.atom()?;
                let f = match head.as_str() {
                    "and" | "or" | "implies" => {
                        let a = self.parse()?;
                        let b = self.parse()?;
                        match head.as_str() {
                            "and" => Formula::and(a, b),
                            "or" => Formula::or(a, b),
                            _ => Formula::implies(a, b),
                        }
                    }
                    "not" => Formula::not(self.parse()?),
                    "forall" | "exists" => {
                        let v = self.individual_var()?;
                        let body = self.parse()?;
                        if head == "forall" {
                            Formula::Forall(v, Box::new(body))
                        } else {
                            Formula::Exists(v, Box::new(body))
                        }
                    }
                    "forall-set" | "exists-set" => {
                        let v = self.set_var()?;
                        let body = self.parse()?;
                        if head == "forall-set" {
                            Formula::ForallSet(v, Box::new(body))
                        } else {
                            Formula::ExistsSet(v, Box::new(body))
                        }
                    }
                    "cmod" => {
                        let residue = self.nat()?;
                        let modulus = self.nat()?;
                        let var = self.individual_var()?;
                        let body = self.parse()?;
                        Formula::CMod {
                            residue,
                            modulus,
                            var,
                            body: Box::new(body),
                        }
                    }
                    "rel" => {
                        let symbol = self.atom()?;
                        let mut terms = Vec::new();
                        loop {
                            self.skip_ws();
                            if let Some(b')') = self.src.get(self.pos).copied() {
                                break;
                            }
                            terms.push(self.individual_var()?);
                        }
                        if terms.is_empty() {
                            return Err(self.err("relation atom needs at least one term"));
                        }
                        self.bump(); // consume ')'
                        return Ok(Formula::Rel { symbol, terms });
                    }
                    "in" => {
                        let term = self.individual_var()?;
                        let set = self.set_var()?;
                        Formula::In { term, set }
                    }
                    "=" => {
                        let a = self.individual_var()?;
                        let b = self.individual_var()?;
                        Formula::Eq(a, b)
                    }
                    "<" => {
                        let a = self.individual_var()?;
                        let b = self.individual_var()?;
                        Formula::Lt(a, b)
                    }
                    other => return Err(self.err(format!("unknown operator '{other}'"))),
                };
                self.expect_rparen()?;
                Ok(f)
            }
        }
    }
}

pub(crate) fn is_individual_var(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_set_var(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_uppercase())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::from_triples(&[("E", 2, true)])
    }

    #[test]
    fn parses_quantified_atom() {
        let f = parse_formula("(forall x (rel E x x))", &vocab()).unwrap();
        assert_eq!(f, Formula::forall("x", Formula::rel("E", &["x", "x"])));
    }

    #[test]
    fn parses_cmod() {
        let f = parse_formula("(cmod 0 2 x true)", &vocab()).unwrap();
        assert_eq!(f, Formula::cmod(0, 2, "x", Formula::True));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let e = parse_formula("(forall x (rel E x))", &vocab()).unwrap_err();
        assert!(matches!(e, LogicError::ArityMismatch { .. }));
    }

    #[test]
    fn syntax_error_carries_position() {
        let e = parse_formula("(and true", &vocab()).unwrap_err();
        match e {
            LogicError::Syntax { line, col, .. } => {
                assert_eq!(line, 1);
                assert!(col >= 9);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unbound_variable_rejected() {
        let e = parse_formula("(rel E x x)", &vocab()).unwrap_err();
        assert!(matches!(e, LogicError::UnboundVariable(_)));
    }

    #[test]
    fn print_parse_round_trip() {
        let texts = [
            "(forall x (exists y (and (rel E x y) (not (= x y)))))",
            "(exists-set U (forall x (implies (in x U) (exists y (< x y)))))",
            "(cmod 1 3 x (or true false))",
        ];
        for t in texts {
            let f = parse_formula(t, &vocab()).unwrap();
            assert_eq!(f.to_sexpr(), *t);
            assert_eq!(parse_formula(&f.to_sexpr(), &vocab()).unwrap(), f);
        }
    }
}
