//! Independent exact generators for the registered families. These are the
//! reference lane: closed forms and classical recurrences, kept separate
//! from the logic/counting machinery they validate. Each one has a direct
//! enumeration cross-check in the tests below.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from((n - i) as u64);
        den *= BigUint::from((i + 1) as u64);
    }
    num / den
}

pub fn pow2(exp: usize) -> BigUint {
    BigUint::one() << exp
}

/// `2^(n^2)`, the number of binary relations on `[n]`.
pub fn binary_relations(n: usize) -> BigUint {
    pow2(n * n)
}

pub fn binary_relations_mod(m: u64, len: usize) -> Vec<u64> {
    (0..len).map(|n| pow_mod(2, (n * n) as u64, m)).collect()
}

pub fn linear_orders(n: usize) -> BigUint {
    factorial(n)
}

pub fn factorial_mod(m: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 1 % m;
    out.push(acc);
    for n in 1..len as u64 {
        acc = (acc as u128 * (n % m) as u128 % m as u128) as u64;
        out.push(acc);
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Bell numbers `B_0..B_{len-1}` via the Bell triangle.
pub fn bell(len: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let mut row = vec![BigUint::one()];
    out.push(BigUint::one());
    for _ in 1..len {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for prev in &row {
            let last: BigUint = next.last().unwrap() + prev;
            next.push(last);
        }
        out.push(next[0].clone());
        row = next;
    }
    out
}

/// Bell numbers modulo m; the triangle keeps this linear in `len^2` words.
pub fn bell_mod(m: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let mut row = vec![1 % m];
    out.push(1 % m);
    for _ in 1..len {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for prev in &row {
            let v = (*next.last().unwrap() + prev) % m;
            next.push(v);
        }
        out.push(next[0]);
        row = next;
    }
    out
}

/// Stirling numbers of the second kind `{n brace r}`.
pub fn stirling2(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    if n == 0 {
        return BigUint::one(); // {0 brace 0}
    }
    if r == 0 {
        return BigUint::zero();
    }
    let mut row = vec![BigUint::one()]; // {0 brace 0}
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i + 1];
        for k in 1..=i {
            let carry = if k < row.len() {
                row[k].clone() * BigUint::from(k as u64)
            } else {
                BigUint::zero()
            };
            next[k] = &row[k - 1] + carry;
        }
        row = next;
    }
    row.get(r).cloned().unwrap_or_else(BigUint::zero)
}

pub fn stirling2_mod(m: u64, r: usize, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    let mut row = vec![1 % m]; // n = 0
    out.push(if r == 0 { 1 % m } else { 0 });
    for _ in 1..len {
        let i = row.len();
        let mut next = vec![0u64; i + 1];
        for k in 1..=i {
            let carry = if k < row.len() {
                (row[k] as u128 * (k as u64 % m) as u128 % m as u128) as u64
            } else {
                0
            };
            next[k] = ((row[k - 1] + carry) % m + m) % m;
        }
        out.push(next.get(r).copied().unwrap_or(0));
        row = next;
    }
    out
}

/// Unsigned Stirling numbers of the first kind `[n brack r]`: permutations
/// of `[n]` with exactly `r` cycles.
pub fn stirling1(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    if n == 0 {
        return BigUint::one();
    }
    let mut row = vec![BigUint::one()];
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i + 1];
        for k in 1..=i {
            let carry = if k < row.len() {
                row[k].clone() * BigUint::from((i - 1) as u64)
            } else {
                BigUint::zero()
            };
            next[k] = &row[k - 1] + carry;
        }
        row = next;
    }
    row.get(r).cloned().unwrap_or_else(BigUint::zero)
}

pub fn stirling1_mod(m: u64, r: usize, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    let mut row = vec![1 % m];
    out.push(if r == 0 { 1 % m } else { 0 });
    for n in 1..len {
        let i = row.len();
        let mut next = vec![0u64; i + 1];
        for k in 1..=i {
            let carry = if k < row.len() {
                (row[k] as u128 * ((n - 1) as u64 % m) as u128 % m as u128) as u64
            } else {
                0
            };
            next[k] = (row[k - 1] + carry) % m;
        }
        out.push(next.get(r).copied().unwrap_or(0));
        row = next;
    }
    out
}

/// Catalan numbers `C_0..C_{len-1}` by the convolution recurrence.
pub fn catalan(len: usize) -> Vec<BigUint> {
    let mut out: Vec<BigUint> = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            out.push(BigUint::one());
            continue;
        }
        let mut acc = BigUint::zero();
        for i in 0..n {
            acc += &out[i] * &out[n - 1 - i];
        }
        out.push(acc);
    }
    out
}

pub fn catalan_mod(m: u64, len: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            out.push(1 % m);
            continue;
        }
        let mut acc = 0u128;
        for i in 0..n {
            acc += out[i] as u128 * out[n - 1 - i] as u128 % m as u128;
        }
        out.push((acc % m as u128) as u64);
    }
    out
}

/// Number of height profiles `a_0..a_{2n-1}` with `a_0 = 1`, steps of one,
/// `a_{2n-1} = 0`, staying nonnegative: the direct tuple-condition oracle.
pub fn ballot_count(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    fn walk(height: i64, steps_left: usize) -> u64 {
        if steps_left == 0 {
            return u64::from(height == 0);
        }
        let mut total = 0;
        for d in [1i64, -1] {
            let h = height + d;
            if h >= 0 {
                total += walk(h, steps_left - 1);
            }
        }
        total
    }
    BigUint::from(walk(1, 2 * n - 1))
}

/// Labeled trees on `[n]`.
pub fn trees(n: usize) -> BigUint {
    match n {
        0 | 1 => BigUint::one(),
        _ => {
            let base = BigUint::from(n as u64);
            let mut acc = BigUint::one();
            for _ in 0..(n - 2) {
                acc *= &base;
            }
            acc
        }
    }
}

pub fn trees_mod(m: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|n| match n {
            0 | 1 => 1 % m,
            _ => pow_mod(n as u64, (n - 2) as u64, m),
        })
        .collect()
}

/// `E_{2,=}(n)`: partitions of `[n]` into two equal-size halves; `0` at odd
/// sizes, `C(n, n/2) / 2 = C(n-1, n/2-1)` at even positive sizes.
pub fn e2eq(n: usize) -> BigUint {
    if n == 0 {
        // the defining sentence is vacuously satisfied by the empty structure
        return BigUint::one();
    }
    if n % 2 == 1 {
        return BigUint::zero();
    }
    binomial(n - 1, n / 2 - 1)
}

/// `E_{2,=}` restricted to even sizes: `k` maps to `E_{2,=}(2k)` for `k >= 1`
/// (index 0 holds `E_{2,=}(2)`).
pub fn e2eq_even_mod(m: u64, len: usize) -> Vec<u64> {
    // Pascal triangle mod m up to row 2*len
    let rows = 2 * len + 2;
    let mut tri: Vec<Vec<u64>> = Vec::with_capacity(rows);
    for n in 0..rows {
        let mut row = vec![1 % m; n + 1];
        for k in 1..n {
            row[k] = (tri[n - 1][k - 1] + tri[n - 1][k]) % m;
        }
        tri.push(row);
    }
    (1..=len).map(|k| tri[2 * k - 1][k - 1]).collect()
}

/// Number of even graphs (all degrees even) on `[n]`: `2^C(n-1, 2)`.
pub fn even_graphs(n: usize) -> BigUint {
    if n < 3 {
        return BigUint::one();
    }
    pow2((n - 1) * (n - 2) / 2)
}

/// Connected even graphs (Eulerian, counting K1 as Eulerian) via the rooted
/// component decomposition of even graphs.
#[allow(clippy::needless_range_loop)]
pub fn eulerian(len: usize) -> Vec<BigUint> {
    let mut c: Vec<BigUint> = vec![BigUint::one()]; // index 0 placeholder: empty graph
    for n in 1..len {
        let mut acc = even_graphs(n);
        for k in 1..n {
            let term = binomial(n - 1, k - 1) * &c[k] * even_graphs(n - k);
            acc -= term;
        }
        c.push(acc);
    }
    c
}

pub fn eulerian_mod(m: u64, len: usize) -> Vec<u64> {
    eulerian(len)
        .iter()
        .map(|v| (v % BigUint::from(m)).to_u64().unwrap())
        .collect()
}

/// Falling factorial `x (x-1) ... (x-j+1)` over the integers.
pub fn falling(x: &BigInt, j: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..j {
        acc *= x - BigInt::from(i as i64);
    }
    acc
}

/// Touchard polynomial value `T_n(x) = sum_k {n brace k} x^k`.
pub fn touchard_eval(n: usize, x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for k in 1..=n.max(1) {
        if k > n {
            break;
        }
        let s: BigInt = BigInt::from(stirling2(n, k));
        let mut pw = BigInt::one();
        for _ in 0..k {
            pw *= x;
        }
        acc += s * pw;
    }
    if n == 0 {
        acc = BigInt::one();
    }
    acc
}

/// Mittag-Leffler polynomial value by the direct sum
/// `M_n(x) = sum_k C(n,k) (n-1)^[n-k] 2^k x^[k]` with falling-factorial
/// powers and empty products equal to one.
pub fn mittag_leffler_eval(n: usize, x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let n_minus_1 = BigInt::from(n as i64 - 1);
    for k in 0..=n {
        let choose: BigInt = BigInt::from(binomial(n, k));
        let ff1 = falling(&n_minus_1, n - k);
        let two_k = BigInt::from(2).pow(k as u32);
        let ffx = falling(x, k);
        acc += choose * ff1 * two_k * ffx;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Set partitions of `[n]` counted by restricted-growth strings.
    fn bell_by_enumeration(n: usize) -> u64 {
        fn rec(pos: usize, n: usize, max_block: usize) -> u64 {
            if pos == n {
                return 1;
            }
            let mut total = 0;
            for b in 0..=max_block {
                total += rec(pos + 1, n, max_block.max(b + 1));
            }
            total
        }
        if n == 0 {
            1
        } else {
            rec(0, n, 0)
        }
    }

    fn stirling2_by_enumeration(n: usize, r: usize) -> u64 {
        fn rec(pos: usize, n: usize, max_block: usize, r: usize) -> u64 {
            if pos == n {
                return u64::from(max_block == r);
            }
            let mut total = 0;
            for b in 0..=max_block.min(r.saturating_sub(1)) {
                total += rec(pos + 1, n, max_block.max(b + 1), r);
            }
            total
        }
        if n == 0 {
            u64::from(r == 0)
        } else {
            rec(0, n, 0, r)
        }
    }

    fn stirling1_by_enumeration(n: usize, r: usize) -> u64 {
        // permutations via Heap's algorithm, counting cycles
        fn cycles(perm: &[usize]) -> usize {
            let mut seen = vec![false; perm.len()];
            let mut count = 0;
            for start in 0..perm.len() {
                if seen[start] {
                    continue;
                }
                count += 1;
                let mut i = start;
                while !seen[i] {
                    seen[i] = true;
                    i = perm[i];
                }
            }
            count
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut counter = 0u64;
        permute(&mut perm, 0, &mut |p| {
            if cycles(p) == r {
                counter += 1;
            }
        });
        counter
    }

    fn permute(xs: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == xs.len() {
            f(xs);
            return;
        }
        for i in k..xs.len() {
            xs.swap(k, i);
            permute(xs, k + 1, f);
            xs.swap(k, i);
        }
    }

    #[test]
    fn bell_matches_enumeration_and_known_values() {
        let b = bell(9);
        let expect: Vec<u64> = vec![1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(b[i], BigUint::from(*e), "B_{i}");
        }
        for n in 0..=8 {
            assert_eq!(b[n], BigUint::from(bell_by_enumeration(n)), "n={n}");
        }
    }

    #[test]
    fn stirling_tables_match_enumeration() {
        for n in 0..=7 {
            for r in 0..=n {
                assert_eq!(
                    stirling2(n, r),
                    BigUint::from(stirling2_by_enumeration(n, r)),
                    "{{{n} brace {r}}}"
                );
                if n <= 6 {
                    assert_eq!(
                        stirling1(n, r),
                        BigUint::from(stirling1_by_enumeration(n, r)),
                        "[{n} brack {r}]"
                    );
                }
            }
        }
        // spec-pinned rows
        assert_eq!(stirling2(3, 1), BigUint::from(1u32));
        assert_eq!(stirling2(3, 2), BigUint::from(3u32));
        assert_eq!(stirling2(3, 3), BigUint::from(1u32));
        for n in 1..=5 {
            assert_eq!(stirling1(n, 1), factorial(n - 1), "n={n}");
        }
    }

    #[test]
    fn catalan_matches_ballot_walks() {
        let c = catalan(9);
        let expect: Vec<u64> = vec![1, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(c[n], BigUint::from(*e), "C_{n}");
            assert_eq!(ballot_count(n), BigUint::from(*e), "ballot {n}");
        }
    }

    #[test]
    fn catalan_parity_rule() {
        // odd exactly at n = 2^k - 1
        let residues = catalan_mod(2, 65);
        for (n, &r) in residues.iter().enumerate() {
            let is_pow2_minus_1 = (n as u64 + 1).is_power_of_two();
            assert_eq!(r == 1, is_pow2_minus_1, "n={n}");
        }
    }

    #[test]
    fn e2eq_values() {
        let expect: Vec<u64> = vec![0, 1, 0, 3, 0, 10, 0, 35];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(e2eq(i + 1), BigUint::from(*e), "n={}", i + 1);
        }
        // parity on even indices: odd exactly when the half-size is a power of two
        let evens = e2eq_even_mod(2, 66);
        for (i, &r) in evens.iter().enumerate() {
            let k = (i + 1) as u64;
            assert_eq!(r == 1, k.is_power_of_two(), "k={k}");
        }
    }

    #[test]
    fn eulerian_small_values() {
        let c = eulerian(6);
        let expect: Vec<u64> = vec![1, 1, 0, 1, 3, 38];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(c[n], BigUint::from(*e), "n={n}");
        }
    }

    #[test]
    fn trees_small_values() {
        let expect: Vec<u64> = vec![1, 1, 1, 3, 16, 125, 1296];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(trees(n), BigUint::from(*e), "n={n}");
        }
    }

    #[test]
    fn touchard_and_bell() {
        // T_n(1) = B_n
        let b = bell(7);
        for n in 0..7 {
            assert_eq!(
                touchard_eval(n, &BigInt::one()),
                BigInt::from(b[n].clone()),
                "n={n}"
            );
        }
        // T_3(x) = x + 3x^2 + x^3 at x = 2
        assert_eq!(touchard_eval(3, &BigInt::from(2)), BigInt::from(22));
    }

    #[test]
    fn mittag_leffler_recurrence_identity() {
        // 2 M_{n+1}(x) = x [ M_n(x+1) + 2 M_n(x) + M_n(x-1) ]
        for n in 1..=6usize {
            for xv in -2i64..=3 {
                let x = BigInt::from(xv);
                let lhs = BigInt::from(2) * mittag_leffler_eval(n + 1, &x);
                let rhs = &x
                    * (mittag_leffler_eval(n, &(&x + 1))
                        + BigInt::from(2) * mittag_leffler_eval(n, &x)
                        + mittag_leffler_eval(n, &(&x - 1)));
                assert_eq!(lhs, rhs, "n={n} x={xv}");
            }
        }
        assert_eq!(
            mittag_leffler_eval(1, &BigInt::from(5)),
            BigInt::from(10) // M_1(x) = 2x
        );
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(factorial_mod(5, 7), vec![1, 1, 2, 1, 4, 0, 0]);
    }
}
