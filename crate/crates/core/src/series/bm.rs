//! Berlekamp-Massey over an exact field, plus the integer-recurrence
//! detector used throughout the crate: run BM over the rationals, check
//! integrality, and convert trailing zero coefficients into a preperiod.

use super::{generate_terms, LinRec, LinRecOf, SeriesError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact field context for the Berlekamp-Massey recursion.
pub trait Field {
    type El: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn inv(&self, a: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
}

pub struct RationalField;

impl Field for RationalField {
    type El = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// `Z_p` for prime `p`.
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, SeriesError> {
        if !is_prime(p) {
            return Err(SeriesError::CompositeModulus { m: p });
        }
        Ok(PrimeField { p })
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * b as u128) % self.p as u128) as u64;
            }
            b = ((b as u128 * b as u128) % self.p as u128) as u64;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type El = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + (self.p - *b % self.p) as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        self.pow(*a, self.p - 2)
    }
    fn is_zero(&self, a: &u64) -> bool {
        a.is_multiple_of(self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Result of a Berlekamp-Massey run: `f(n) = sum_j coeffs[j-1] f(n-j)` holds
/// for every index of the input prefix from `order` onward.
#[derive(Debug, Clone)]
pub struct BmResult<T> {
    pub coeffs: Vec<T>,
    pub order: usize,
}

/// Minimal-order recurrence generating the prefix. Errors when the prefix is
/// shorter than twice the discovered order, i.e. the order has not
/// stabilized.
pub fn berlekamp_massey<F: Field>(
    field: &F,
    prefix: &[F::El],
) -> Result<BmResult<F::El>, SeriesError> {
    // connection polynomial C with C[0] = 1:
    // sum_{i=0..L} C[i] * s[j-i] = 0 for all L <= j < len
    let mut c = vec![field.one()];
    let mut b = vec![field.one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut b_disc = field.one();

    for i in 0..prefix.len() {
        let mut delta = prefix[i].clone();
        for j in 1..=l {
            if j < c.len() {
                delta = field.add(&delta, &field.mul(&c[j], &prefix[i - j]));
            }
        }
        if field.is_zero(&delta) {
            m += 1;
        } else if 2 * l <= i {
            let t = c.clone();
            let coef = field.mul(&delta, &field.inv(&b_disc));
            while c.len() < b.len() + m {
                c.push(field.zero());
            }
            for (j, bj) in b.iter().enumerate() {
                let adj = field.mul(&coef, bj);
                c[j + m] = field.sub(&c[j + m], &adj);
            }
            l = i + 1 - l;
            b = t;
            b_disc = delta;
            m = 1;
        } else {
            let coef = field.mul(&delta, &field.inv(&b_disc));
            while c.len() < b.len() + m {
                c.push(field.zero());
            }
            for (j, bj) in b.iter().enumerate() {
                let adj = field.mul(&coef, bj);
                c[j + m] = field.sub(&c[j + m], &adj);
            }
            m += 1;
        }
    }

    if prefix.len() < 2 * l {
        return Err(SeriesError::PrefixTooShort { unstable_order: l });
    }
    // f(n) = -sum_{j>=1} C[j] f(n-j)
    let mut coeffs = Vec::with_capacity(l);
    for j in 1..=l {
        let cj = c.get(j).cloned().unwrap_or_else(|| field.zero());
        coeffs.push(field.sub(&field.zero(), &cj));
    }
    Ok(BmResult { coeffs, order: l })
}

/// BM over `Z_p`. Composite moduli are rejected: with zero divisors the
/// minimal recurrence is not well defined, so only periodicity detection is
/// offered for those.
pub fn berlekamp_massey_mod_p(prefix: &[u64], p: u64) -> Result<BmResult<u64>, SeriesError> {
    let field = PrimeField::new(p)?;
    let reduced: Vec<u64> = prefix.iter().map(|&x| x % p).collect();
    berlekamp_massey(&field, &reduced)
}

/// Run BM over the rationals and, when all coefficients come out integral,
/// package the result as an integer recurrence. Trailing zero coefficients
/// are converted into a preperiod: `x^k * C(x)` annihilating the sequence
/// means `C` already governs it from index `k` on.
pub fn detect_integer_recurrence(prefix: &[BigInt]) -> Result<LinRec, SeriesError> {
    if prefix.iter().all(|t| t.is_zero()) {
        return Ok(LinRec::zero_rec());
    }
    let rationals: Vec<BigRational> = prefix
        .iter()
        .map(|t| BigRational::from_integer(t.clone()))
        .collect();
    let bm = berlekamp_massey(&RationalField, &rationals)?;
    if bm.coeffs.iter().any(|c| !c.is_integer()) {
        return Err(SeriesError::NonIntegralRecurrence { order: bm.order });
    }
    let mut coeffs: Vec<BigInt> = bm.coeffs.iter().map(|c| c.to_integer()).collect();
    let mut preperiod = 0usize;
    while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()) == Some(true) {
        coeffs.pop();
        preperiod += 1;
    }
    let d = coeffs.len();
    if prefix.len() < d + preperiod {
        return Err(SeriesError::PrefixTooShort {
            unstable_order: d + preperiod,
        });
    }
    let mut rec = LinRecOf::new(coeffs, prefix[..d + preperiod].to_vec());
    rec.preperiod = preperiod;
    // regeneration must reproduce the entire prefix
    let regen = generate_terms(&rec, prefix.len());
    if regen != prefix {
        return Err(SeriesError::ValidationFailed {
            context: "berlekamp-massey regeneration",
        });
    }
    Ok(rec)
}

/// Re-detect the minimal recurrence from a generated window of `rec`.
pub fn minimize_linrec(rec: &LinRec) -> Result<LinRec, SeriesError> {
    let window = 2 * (rec.order() + rec.preperiod) + 8;
    let terms = generate_terms(rec, window);
    let mut out = detect_integer_recurrence(&terms)?;
    out.base = rec.base;
    Ok(out)
}
