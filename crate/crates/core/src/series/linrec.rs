use super::{MultiPoly, SeriesError};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Coefficient-ring context objects. A small hand-rolled trait keeps the
/// recurrence evaluator generic over the integers, residue rings, and the
/// polynomial ring.
pub trait Ring {
    type El: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool {
        *a == self.zero()
    }
}

pub struct IntRing;

impl Ring for IntRing {
    type El = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::from(1)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
}

/// `Z_m` with values reduced to `0..m`.
pub struct ModRing {
    pub m: u64,
}

impl Ring for ModRing {
    type El = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.m
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.m as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.m as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.m - a % self.m) % self.m
    }
}

/// `Z[x_0..x_{nvars-1}]`.
pub struct PolyRing {
    pub nvars: usize,
}

impl Ring for PolyRing {
    type El = MultiPoly;
    fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self.nvars)
    }
    fn one(&self) -> MultiPoly {
        MultiPoly::constant(self.nvars, 1)
    }
    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.add(b)
    }
    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.mul(b)
    }
    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        a.neg()
    }
}

/// A linear recurrence `f(n) = sum_j coeffs[j-1] * f(n-j)` with explicit
/// initial segment. `initials[0]` is `f(base)`; the initial segment covers
/// `order + preperiod` values, and the recurrence is claimed valid for all
/// `n >= base + order + preperiod`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinRecOf<T> {
    pub coeffs: Vec<T>,
    pub initials: Vec<T>,
    pub base: i64,
    pub preperiod: usize,
}

/// The default integer instance.
pub type LinRec = LinRecOf<BigInt>;

impl<T: Clone + PartialEq + std::fmt::Debug> LinRecOf<T> {
    pub fn new(coeffs: Vec<T>, initials: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "order must be at least 1");
        assert!(
            initials.len() >= coeffs.len(),
            "initial segment must cover the order"
        );
        let preperiod = initials.len() - coeffs.len();
        LinRecOf {
            coeffs,
            initials,
            base: 0,
            preperiod,
        }
    }

    pub fn with_base(mut self, base: i64) -> Self {
        self.base = base;
        self
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
}

impl LinRec {
    pub fn from_i64(coeffs: &[i64], initials: &[i64]) -> Self {
        LinRecOf::new(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            initials.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    /// Canonical representation of the zero sequence.
    pub fn zero_rec() -> Self {
        LinRecOf::new(vec![BigInt::zero()], vec![BigInt::zero()])
    }

    pub fn is_zero_rec(&self) -> bool {
        self.initials.iter().all(|t| t.is_zero()) && self.coeffs.iter().all(|t| t.is_zero())
    }

    /// Reduce coefficients and initials modulo m.
    pub fn reduce_mod(&self, m: u64) -> LinRecOf<u64> {
        let red = |x: &BigInt| -> u64 {
            let r = x % m;
            let r = if r.is_negative() { r + m } else { r };
            r.to_u64().expect("reduced residue fits")
        };
        LinRecOf {
            coeffs: self.coeffs.iter().map(red).collect(),
            initials: self.initials.iter().map(red).collect(),
            base: self.base,
            preperiod: self.preperiod,
        }
    }

    /// Same recurrence rebased so that `initials[0]` is `f(new_base)`.
    /// Only moves the base forward (drops leading initials); the recurrence
    /// must still have a full initial segment afterwards.
    pub fn rebase_forward(&self, new_base: i64) -> Result<LinRec, SeriesError> {
        if new_base < self.base {
            return Err(SeriesError::IndexBelowBase {
                n: new_base,
                base: self.base,
            });
        }
        let drop = (new_base - self.base) as usize;
        let needed = drop + self.order();
        let mut terms = self.initials.clone();
        while terms.len() < needed {
            let n = terms.len();
            let mut acc = BigInt::zero();
            for (j, c) in self.coeffs.iter().enumerate() {
                acc += c * &terms[n - 1 - j];
            }
            terms.push(acc);
        }
        let initials = terms[drop..].to_vec();
        let preperiod = self.preperiod.saturating_sub(drop);
        let mut out = LinRecOf::new(self.coeffs.clone(), initials[..self.order() + preperiod].to_vec());
        out.base = new_base;
        out.preperiod = preperiod;
        Ok(out)
    }
}

/// Evaluate a recurrence at index `n` by forward iteration.
pub fn eval_linrec_in<R: Ring>(
    ring: &R,
    rec: &LinRecOf<R::El>,
    n: i64,
) -> Result<R::El, SeriesError> {
    if n < rec.base {
        return Err(SeriesError::IndexBelowBase { n, base: rec.base });
    }
    let idx = (n - rec.base) as usize;
    if idx < rec.initials.len() {
        return Ok(rec.initials[idx].clone());
    }
    let terms = generate_terms_in(ring, rec, idx + 1);
    Ok(terms.into_iter().last().unwrap())
}

/// First `count` terms starting at the base index.
pub fn generate_terms_in<R: Ring>(ring: &R, rec: &LinRecOf<R::El>, count: usize) -> Vec<R::El> {
    let mut terms: Vec<R::El> = rec.initials.iter().take(count).cloned().collect();
    while terms.len() < count {
        let n = terms.len();
        let mut acc = ring.zero();
        for (j, c) in rec.coeffs.iter().enumerate() {
            acc = ring.add(&acc, &ring.mul(c, &terms[n - 1 - j]));
        }
        terms.push(acc);
    }
    terms
}

pub fn eval_linrec(rec: &LinRec, n: i64) -> Result<BigInt, SeriesError> {
    eval_linrec_in(&IntRing, rec, n)
}

pub fn generate_terms(rec: &LinRec, count: usize) -> Vec<BigInt> {
    generate_terms_in(&IntRing, rec, count)
}

/// External JSON form: coefficients as plain integers, initial values as
/// decimal strings (they can exceed 64 bits).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinRecJson {
    pub coeffs: Vec<i64>,
    pub initials: Vec<String>,
    pub base: i64,
    pub preperiod: usize,
}

impl LinRec {
    pub fn to_json_struct(&self) -> Result<LinRecJson, SeriesError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.to_i64().ok_or(SeriesError::CoeffOverflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinRecJson {
            coeffs,
            initials: self.initials.iter().map(|t| t.to_string()).collect(),
            base: self.base,
            preperiod: self.preperiod,
        })
    }

    pub fn from_json_struct(j: &LinRecJson) -> Result<LinRec, SeriesError> {
        let initials: Vec<BigInt> = j
            .initials
            .iter()
            .map(|s| s.parse::<BigInt>())
            .collect::<Result<_, _>>()
            .map_err(|_| SeriesError::ValidationFailed {
                context: "linrec json initials",
            })?;
        let coeffs: Vec<BigInt> = j.coeffs.iter().map(|&c| BigInt::from(c)).collect();
        let mut rec = LinRecOf::new(coeffs, initials);
        rec.base = j.base;
        rec.preperiod = j.preperiod;
        Ok(rec)
    }
}
