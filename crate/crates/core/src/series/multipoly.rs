use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Multivariate integer polynomial with a fixed variable count; terms are
/// keyed by exponent vectors, zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exps = vec![0u32; nvars];
        exps[i] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.terms.insert(exps, BigInt::one());
        p
    }

    pub fn monomial(nvars: usize, coeff: impl Into<BigInt>, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), nvars);
        let c = coeff.into();
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = out.terms.entry(e.clone()).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
                if entry.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.nvars, 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, values: &[BigInt]) -> BigInt {
        assert_eq!(values.len(), self.nvars);
        let mut total = BigInt::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (v, &e) in values.iter().zip(exps) {
                for _ in 0..e {
                    term *= v;
                }
            }
            total += term;
        }
        total
    }

    /// Substitute each variable by the given polynomial (all over a common
    /// fresh variable set).
    pub fn substitute(&self, subs: &[MultiPoly]) -> MultiPoly {
        assert_eq!(subs.len(), self.nvars);
        let out_vars = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut total = MultiPoly::zero(out_vars);
        for (exps, coeff) in &self.terms {
            let mut term = MultiPoly::constant(out_vars, coeff.clone());
            for (sub, &e) in subs.iter().zip(exps) {
                term = term.mul(&sub.pow(e));
            }
            total = total.add(&term);
        }
        total
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{coeff}")?;
            for (i, &e) in exps.iter().enumerate() {
                if e == 1 {
                    write!(f, "*x{i}")?;
                } else if e > 1 {
                    write!(f, "*x{i}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        // (2x + 1)^2 = 4x^2 + 4x + 1
        let x = MultiPoly::var(1, 0);
        let p = MultiPoly::constant(1, 2).mul(&x).add(&MultiPoly::constant(1, 1));
        let sq = p.mul(&p);
        assert_eq!(sq.eval(&[BigInt::from(3)]), BigInt::from(49));
        assert_eq!(sq.terms().count(), 3);
    }

    #[test]
    fn substitution_composes() {
        // p(x) = x^2 + 1; substitute x -> w0 + w1
        let x = MultiPoly::var(1, 0);
        let p = x.mul(&x).add(&MultiPoly::constant(1, 1));
        let w0 = MultiPoly::var(2, 0);
        let w1 = MultiPoly::var(2, 1);
        let q = p.substitute(&[w0.add(&w1)]);
        assert_eq!(
            q.eval(&[BigInt::from(2), BigInt::from(3)]),
            BigInt::from(26)
        );
    }
}
