//! Closure of C-finite sequences under sum, difference and Hadamard product.

use super::{generate_terms, gf_from_linrec, gf_to_linrec, LinRec, LinRecOf, RationalGF, SeriesError};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Sum,
    Difference,
    HadamardProduct,
}

/// Combine two integer recurrences termwise. Sums and differences go through
/// the product of generating-function denominators (order at most d1 + d2);
/// the Hadamard product uses the Kronecker product of companion matrices
/// (order at most d1 * d2). The output is validated against the termwise
/// combination over a window of twice its order plus eight.
pub fn combine_recurrences(
    op: CombineOp,
    r1: &LinRec,
    r2: &LinRec,
) -> Result<LinRec, SeriesError> {
    if r1.base != 0 {
        return Err(SeriesError::BaseNotZero(r1.base));
    }
    if r2.base != 0 {
        return Err(SeriesError::BaseNotZero(r2.base));
    }
    let candidate = match op {
        CombineOp::Sum | CombineOp::Difference => {
            let g1 = gf_from_linrec(r1)?;
            let g2 = gf_from_linrec(r2)?;
            let sign = if op == CombineOp::Sum { 1 } else { -1 };
            let p = poly_add(
                &poly_mul(&g1.p, &g2.q),
                &poly_mul(&g2.p, &g1.q),
                sign,
            );
            let q = poly_mul(&g1.q, &g2.q);
            gf_to_linrec(&RationalGF { p, q })?
        }
        CombineOp::HadamardProduct => {
            if r1.preperiod != 0 || r2.preperiod != 0 {
                return Err(SeriesError::HadamardNeedsNoPreperiod);
            }
            let a = companion_matrix(r1);
            let b = companion_matrix(r2);
            let k = kronecker(&a, &b);
            let coeffs = char_poly(&k);
            let d = coeffs.len();
            let t1 = generate_terms(r1, d);
            let t2 = generate_terms(r2, d);
            let initials: Vec<BigInt> = t1.iter().zip(&t2).map(|(x, y)| x * y).collect();
            LinRecOf::new(coeffs, initials)
        }
    };

    // termwise validation window
    let window = 2 * (candidate.order() + candidate.preperiod) + 8;
    let t1 = generate_terms(r1, window);
    let t2 = generate_terms(r2, window);
    let expected: Vec<BigInt> = t1
        .iter()
        .zip(&t2)
        .map(|(x, y)| match op {
            CombineOp::Sum => x + y,
            CombineOp::Difference => x - y,
            CombineOp::HadamardProduct => x * y,
        })
        .collect();
    if expected.iter().all(|t| t.is_zero()) {
        return Ok(LinRec::zero_rec());
    }
    let got = generate_terms(&candidate, window);
    if got != expected {
        return Err(SeriesError::ValidationFailed {
            context: "combine_recurrences",
        });
    }
    Ok(candidate)
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); (a.len() + b.len()).saturating_sub(1).max(1)];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[BigInt], b: &[BigInt], sign: i32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        if sign >= 0 {
            out[i] += y;
        } else {
            out[i] -= y;
        }
    }
    out
}

/// Companion matrix whose powers advance the recurrence's state vector
/// `(f(n), f(n-1), ..., f(n-d+1))`.
pub fn companion_matrix(rec: &LinRec) -> Vec<Vec<BigInt>> {
    let d = rec.order();
    let mut m = vec![vec![BigInt::zero(); d]; d];
    for (j, c) in rec.coeffs.iter().enumerate() {
        m[0][j] = c.clone();
    }
    for i in 1..d {
        m[i][i - 1] = BigInt::one();
    }
    m
}

fn kronecker(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n1 = a.len();
    let n2 = b.len();
    let n = n1 * n2;
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i1 in 0..n1 {
        for j1 in 0..n1 {
            if a[i1][j1].is_zero() {
                continue;
            }
            for i2 in 0..n2 {
                for j2 in 0..n2 {
                    out[i1 * n2 + i2][j1 * n2 + j2] = &a[i1][j1] * &b[i2][j2];
                }
            }
        }
    }
    out
}

/// Characteristic polynomial by the Faddeev-LeVerrier recursion; all interior
/// divisions are exact over the integers. Returns `c_1..c_d` such that the
/// matrix power sequence satisfies `A^n = sum_k c_k A^{n-k}`, i.e. the
/// recurrence coefficients certified by Cayley-Hamilton.
pub fn char_poly(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let d = m.len();
    let mut acc: Vec<Vec<BigInt>> = identity(d);
    let mut coeffs = Vec::with_capacity(d);
    for k in 1..=d {
        let n = mat_mul(m, &acc);
        let t = trace(&n);
        let (c, rem) = num_integer::Integer::div_rem(&t, &BigInt::from(k as i64));
        debug_assert!(rem.is_zero(), "Faddeev-LeVerrier division is exact");
        coeffs.push(c.clone());
        acc = n;
        for (i, row) in acc.iter_mut().enumerate().take(d) {
            row[i] -= &c;
        }
    }
    coeffs
}

fn identity(d: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); d]; d];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let d = a.len();
    let mut out = vec![vec![BigInt::zero(); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

fn trace(m: &[Vec<BigInt>]) -> BigInt {
    m.iter().enumerate().map(|(i, row)| row[i].clone()).sum()
}
