//! Rational generating functions and truncated power-series arithmetic.

use super::{generate_terms, LinRec, LinRecOf, SeriesError};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.len() > 1 && p.last().map(|c| c.is_zero()) == Some(true) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `P(x) / Q(x)` with `Q(0) = 1`; its power-series coefficients satisfy the
/// recurrence read off from `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalGF {
    pub p: Vec<BigInt>,
    pub q: Vec<BigInt>,
}

impl RationalGF {
    pub fn new(p: Vec<BigInt>, q: Vec<BigInt>) -> Result<Self, SeriesError> {
        let q = trim(q);
        if q.first().map(|c| c.is_one()) != Some(true) {
            return Err(SeriesError::DenominatorConstantNotOne);
        }
        Ok(RationalGF { p: trim(p), q })
    }

    /// First `count` power-series coefficients by long division.
    pub fn expand(&self, count: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(count);
        for n in 0..count {
            let mut acc = self
                .p
                .get(n)
                .cloned()
                .unwrap_or_else(BigInt::zero);
            for j in 1..self.q.len().min(n + 1) {
                acc -= &self.q[j] * &out[n - j];
            }
            out.push(acc);
        }
        out
    }
}

/// `Q(x) = 1 - sum_j a_j x^j`; `P` is fixed by consistency with the initial
/// segment. Requires index base 0.
pub fn gf_from_linrec(rec: &LinRec) -> Result<RationalGF, SeriesError> {
    if rec.base != 0 {
        return Err(SeriesError::BaseNotZero(rec.base));
    }
    let d = rec.order();
    let head = d + rec.preperiod;
    let mut q = vec![BigInt::one()];
    for a in &rec.coeffs {
        q.push(-a);
    }
    let q = trim(q);
    // P = F * Q truncated below the point where the recurrence takes over
    let window = head + q.len() + 8;
    let terms = generate_terms(rec, window);
    let prod = poly_mul(&terms, &q);
    for (i, c) in prod.iter().enumerate() {
        if i >= head && i < terms.len().saturating_sub(q.len()) && !c.is_zero() {
            return Err(SeriesError::ValidationFailed {
                context: "gf_from_linrec truncation",
            });
        }
    }
    let p = trim(prod.into_iter().take(head).collect());
    let gf = RationalGF { p, q };
    // re-expansion must reproduce the initial segment exactly
    if gf.expand(head.min(terms.len())) != terms[..head.min(terms.len())] {
        return Err(SeriesError::ValidationFailed {
            context: "gf_from_linrec expansion",
        });
    }
    Ok(gf)
}

/// Inverse direction: read the recurrence off the denominator; the numerator
/// degree determines the preperiod.
pub fn gf_to_linrec(gf: &RationalGF) -> Result<LinRec, SeriesError> {
    if gf.q.first().map(|c| c.is_one()) != Some(true) {
        return Err(SeriesError::DenominatorConstantNotOne);
    }
    let q = trim(gf.q.clone());
    let p = trim(gf.p.clone());
    if q.len() == 1 {
        // polynomial series: finitely many nonzero terms
        let mut initials = p.clone();
        initials.push(BigInt::zero());
        let mut rec = LinRecOf::new(vec![BigInt::zero()], initials);
        rec.preperiod = rec.initials.len() - 1;
        return Ok(rec);
    }
    let d = q.len() - 1;
    let coeffs: Vec<BigInt> = q[1..].iter().map(|c| -c).collect();
    let deg_p = if p.iter().all(|c| c.is_zero()) {
        None
    } else {
        Some(p.len() - 1)
    };
    let preperiod = match deg_p {
        Some(dp) if dp + 1 > d => dp + 1 - d,
        _ => 0,
    };
    let initials = RationalGF {
        p: p.clone(),
        q: q.clone(),
    }
    .expand(d + preperiod);
    let mut rec = LinRecOf::new(coeffs, initials);
    rec.preperiod = preperiod;
    Ok(rec)
}

/// Expression tree over integer polynomials closed under sum, product and
/// star.
#[derive(Debug, Clone)]
pub enum RationalExpr {
    Poly(Vec<BigInt>),
    Add(Box<RationalExpr>, Box<RationalExpr>),
    Mul(Box<RationalExpr>, Box<RationalExpr>),
    Star(Box<RationalExpr>),
}

#[allow(clippy::should_implement_trait)]
impl RationalExpr {
    pub fn poly(coeffs: &[i64]) -> RationalExpr {
        RationalExpr::Poly(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
    pub fn add(a: RationalExpr, b: RationalExpr) -> RationalExpr {
        RationalExpr::Add(Box::new(a), Box::new(b))
    }
    pub fn mul(a: RationalExpr, b: RationalExpr) -> RationalExpr {
        RationalExpr::Mul(Box::new(a), Box::new(b))
    }
    pub fn star(a: RationalExpr) -> RationalExpr {
        RationalExpr::Star(Box::new(a))
    }
}

/// First `n_max + 1` coefficients of the expression, by exact truncated
/// power-series arithmetic. The star of a series with nonzero constant term
/// is rejected.
pub fn eval_rational_expr(expr: &RationalExpr, n_max: usize) -> Result<Vec<BigInt>, SeriesError> {
    let len = n_max + 1;
    let out = eval_expr(expr, len)?;
    Ok(out)
}

fn eval_expr(expr: &RationalExpr, len: usize) -> Result<Vec<BigInt>, SeriesError> {
    match expr {
        RationalExpr::Poly(p) => {
            let mut out = vec![BigInt::zero(); len];
            for (i, c) in p.iter().take(len).enumerate() {
                out[i] = c.clone();
            }
            Ok(out)
        }
        RationalExpr::Add(a, b) => {
            let x = eval_expr(a, len)?;
            let y = eval_expr(b, len)?;
            Ok(x.into_iter().zip(y).map(|(p, q)| p + q).collect())
        }
        RationalExpr::Mul(a, b) => {
            let x = eval_expr(a, len)?;
            let y = eval_expr(b, len)?;
            let mut out = vec![BigInt::zero(); len];
            for i in 0..len {
                for j in 0..=i {
                    out[i] += &x[j] * &y[i - j];
                }
            }
            Ok(out)
        }
        RationalExpr::Star(a) => {
            let f = eval_expr(a, len)?;
            if !f[0].is_zero() {
                return Err(SeriesError::StarOfUnit);
            }
            // G = 1/(1-F): G_0 = 1, G_n = sum_{k=1..n} F_k G_{n-k}
            let mut g = vec![BigInt::zero(); len];
            g[0] = BigInt::one();
            for n in 1..len {
                let mut acc = BigInt::zero();
                for k in 1..=n {
                    acc += &f[k] * &g[n - k];
                }
                g[n] = acc;
            }
            Ok(g)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fibonacci_gf() {
        let fib = LinRec::from_i64(&[1, 1], &[0, 1]);
        let gf = gf_from_linrec(&fib).unwrap();
        assert_eq!(gf.p, big(&[0, 1])); // x
        assert_eq!(gf.q, big(&[1, -1, -1])); // 1 - x - x^2
        assert_eq!(gf.expand(6), big(&[0, 1, 1, 2, 3, 5]));
    }

    #[test]
    fn constant_one_gf() {
        let ones = LinRec::from_i64(&[1], &[1]);
        let gf = gf_from_linrec(&ones).unwrap();
        assert_eq!(gf.p, big(&[1]));
        assert_eq!(gf.q, big(&[1, -1]));
    }

    #[test]
    fn two_pow_plus_one_gf() {
        let rec = LinRec::from_i64(&[3, -2], &[2, 3]);
        let gf = gf_from_linrec(&rec).unwrap();
        assert_eq!(gf.q, big(&[1, -3, 2]));
        assert_eq!(gf.expand(5), big(&[2, 3, 5, 9, 17]));
    }

    #[test]
    fn round_trip_on_random_small_recurrences() {
        let mut rng = SplitMix64::new(2024);
        let mut tested = 0;
        while tested < 50 {
            let d = 1 + (rng.below(4) as usize);
            let coeffs: Vec<i64> = (0..d).map(|_| rng.below(11) as i64 - 5).collect();
            let initials: Vec<i64> = (0..d).map(|_| rng.below(11) as i64 - 5).collect();
            let rec = LinRec::from_i64(&coeffs, &initials);
            let gf = gf_from_linrec(&rec).unwrap();
            let back = gf_to_linrec(&gf).unwrap();
            // identity on (coeffs, initials) whenever the denominator keeps
            // full degree (a_d = 0 legitimately lowers the order)
            if *coeffs.last().unwrap() != 0 {
                assert_eq!(back.coeffs, rec.coeffs);
                assert_eq!(back.initials, rec.initials);
                tested += 1;
            }
        }
    }

    #[test]
    fn inverse_rejects_bad_denominator() {
        let gf = RationalGF {
            p: big(&[1]),
            q: big(&[2, 1]),
        };
        assert!(matches!(
            gf_to_linrec(&gf),
            Err(SeriesError::DenominatorConstantNotOne)
        ));
    }

    #[test]
    fn star_of_fibonacci_parts() {
        // compositions into parts {1, 2}: star(x + x^2)
        let expr = RationalExpr::star(RationalExpr::poly(&[0, 1, 1]));
        let got = eval_rational_expr(&expr, 8).unwrap();
        assert_eq!(got, big(&[1, 1, 2, 3, 5, 8, 13, 21, 34]));
        // brute-force composition count agrees
        for n in 0..=8usize {
            assert_eq!(got[n], BigInt::from(count_compositions(n)), "n={n}");
        }
    }

    fn count_compositions(n: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        let mut total = 0;
        if n >= 1 {
            total += count_compositions(n - 1);
        }
        if n >= 2 {
            total += count_compositions(n - 2);
        }
        total
    }

    #[test]
    fn binomial_square_and_geometric() {
        let expr = RationalExpr::mul(RationalExpr::poly(&[1, 1]), RationalExpr::poly(&[1, 1]));
        assert_eq!(eval_rational_expr(&expr, 3).unwrap(), big(&[1, 2, 1, 0]));
        let geo = RationalExpr::star(RationalExpr::poly(&[0, 1]));
        assert_eq!(eval_rational_expr(&geo, 4).unwrap(), big(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn star_of_unit_rejected() {
        let expr = RationalExpr::star(RationalExpr::poly(&[1, 1]));
        assert!(matches!(
            eval_rational_expr(&expr, 3),
            Err(SeriesError::StarOfUnit)
        ));
    }

    #[test]
    fn polynomial_gf_round_trips_through_zero_rec() {
        let gf = RationalGF::new(big(&[4, 0, 7]), big(&[1])).unwrap();
        let rec = gf_to_linrec(&gf).unwrap();
        let terms = generate_terms(&rec, 6);
        assert_eq!(terms, big(&[4, 0, 7, 0, 0, 0]));
    }
}
