//! The recurrence-tree path encoding: a partition of `[n]` into step blocks
//! `U_1..U_r`, initial blocks `I_1..I_r` and a skipped set `S` such that the
//! valid partitions correspond exactly to the root-to-leaf paths of the
//! recurrence tree starting at `n`.

use super::poly::{Factor, GuardClause, PositionPred, SpeckerPolynomial};
use super::ConstructError;
use crate::logic::Vocabulary;
use crate::series::{LinRecOf, MultiPoly};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Membership masks for one candidate encoding over universe `[n]`
/// (element `e` is bit `e - 1`; universes up to 63 elements).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathEncoding {
    pub n: usize,
    pub order: usize,
    pub step_blocks: Vec<u64>,
    pub initial_blocks: Vec<u64>,
    pub skipped: u64,
}

/// The validity conditions, checked literally on the masks:
/// 1. the blocks and the skipped set partition `[n]`;
/// 2. the maximum element lies on the path (a step block or initial block);
/// 3. exactly one element is an initial element;
/// 4. initial elements lie in `[r]`, and the block index matches the element
///    (the block `I_k` may hold only the element `k`, which ties the reached
///    initial condition to its index);
/// 5. no element of `[r]` is in a step block;
/// 6. an element `v` in `U_i` has `v-1 .. v-(i-1)` skipped and `v-i` on the
///    path again.
pub fn is_valid_path_encoding(enc: &PathEncoding) -> bool {
    let n = enc.n;
    let r = enc.order;
    if n == 0 || n > 63 || enc.step_blocks.len() != r || enc.initial_blocks.len() != r {
        return false;
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let union_u: u64 = enc.step_blocks.iter().fold(0, |a, b| a | b);
    let union_i: u64 = enc.initial_blocks.iter().fold(0, |a, b| a | b);

    // 1. partition
    let mut seen = 0u64;
    for mask in enc
        .step_blocks
        .iter()
        .chain(enc.initial_blocks.iter())
        .chain(std::iter::once(&enc.skipped))
    {
        if seen & mask != 0 {
            return false;
        }
        seen |= mask;
    }
    if seen != full {
        return false;
    }

    // 2. the path starts at n
    if (union_u | union_i) >> (n - 1) & 1 == 0 {
        return false;
    }

    // 3. exactly one initial element
    if union_i.count_ones() != 1 {
        return false;
    }

    // 4. initial block index matches the element
    for (k, mask) in enc.initial_blocks.iter().enumerate() {
        let allowed = if k < n { 1u64 << k } else { 0 };
        if mask & !allowed != 0 {
            return false;
        }
    }

    // 5. the first r elements never start a step
    let low: u64 = if r >= n { full } else { (1 << r) - 1 };
    if union_u & low != 0 {
        return false;
    }

    // 6. step conditions
    for (idx, mask) in enc.step_blocks.iter().enumerate() {
        let i = idx + 1;
        let mut m = *mask;
        while m != 0 {
            let v = (m.trailing_zeros() + 1) as usize; // element value
            m &= m - 1;
            if v <= i {
                return false;
            }
            for skip in (v - i + 1)..v {
                if enc.skipped >> (skip - 1) & 1 == 0 {
                    return false;
                }
            }
            if (union_u | union_i) >> (v - i - 1) & 1 == 0 {
                return false;
            }
        }
    }
    true
}

/// Evaluate a base-1 recurrence at `n` as the weighted sum over valid path
/// encodings: every element of `U_i` contributes the coefficient factor,
/// the initial element contributes its initial condition, skipped elements
/// contribute weight one. For `n` within the initial segment the value is
/// read directly (the encoding degenerates there).
pub fn encode_recurrence_paths(
    rec: &LinRecOf<MultiPoly>,
    n: i64,
    values: &[BigInt],
) -> Result<BigInt, ConstructError> {
    if rec.coeffs.is_empty() {
        return Err(ConstructError::EmptyRecurrence);
    }
    if rec.base != 1 {
        return Err(ConstructError::BaseMustBeOne(rec.base));
    }
    if n < 1 {
        return Err(ConstructError::IndexOutOfRange(n));
    }
    let r = rec.order();
    for poly in rec.coeffs.iter().chain(rec.initials.iter()) {
        if poly.nvars() != values.len() {
            return Err(ConstructError::UnassignedIndeterminate {
                index: values.len(),
            });
        }
    }
    let n = n as usize;
    if n <= r {
        return Ok(rec.initials[n - 1].eval(values));
    }

    let coeff_vals: Vec<BigInt> = rec.coeffs.iter().map(|p| p.eval(values)).collect();
    let initial_vals: Vec<BigInt> = rec.initials[..r].iter().map(|p| p.eval(values)).collect();

    let mut total = BigInt::zero();
    // walk the recurrence tree, materializing and validating each encoding
    let mut steps: Vec<(usize, usize)> = Vec::new(); // (element, step size)
    walk(
        n,
        r,
        n,
        BigInt::one(),
        &coeff_vals,
        &initial_vals,
        &mut steps,
        &mut total,
    )?;
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    n: usize,
    r: usize,
    current: usize,
    weight: BigInt,
    coeff_vals: &[BigInt],
    initial_vals: &[BigInt],
    steps: &mut Vec<(usize, usize)>,
    total: &mut BigInt,
) -> Result<(), ConstructError> {
    if current <= r {
        let enc = encoding_from_steps(n, r, steps, current);
        if !is_valid_path_encoding(&enc) {
            return Err(ConstructError::ValidationFailed {
                context: "constructed path encoding",
            });
        }
        *total += weight * &initial_vals[current - 1];
        return Ok(());
    }
    for i in 1..=r.min(current - 1) {
        steps.push((current, i));
        let w = &weight * &coeff_vals[i - 1];
        walk(n, r, current - i, w, coeff_vals, initial_vals, steps, total)?;
        steps.pop();
    }
    Ok(())
}

fn encoding_from_steps(n: usize, r: usize, steps: &[(usize, usize)], endpoint: usize) -> PathEncoding {
    let mut enc = PathEncoding {
        n,
        order: r,
        step_blocks: vec![0; r],
        initial_blocks: vec![0; r],
        skipped: 0,
    };
    let mut on_path = 0u64;
    for &(v, i) in steps {
        enc.step_blocks[i - 1] |= 1 << (v - 1);
        on_path |= 1 << (v - 1);
        for skip in (v - i + 1)..v {
            enc.skipped |= 1 << (skip - 1);
        }
    }
    enc.initial_blocks[endpoint - 1] |= 1 << (endpoint - 1);
    on_path |= 1 << (endpoint - 1);
    // everything below the endpoint is skipped
    let full: u64 = (1 << n) - 1;
    enc.skipped |= full & !(on_path | enc.skipped) & ((1 << (endpoint - 1)) - 1);
    enc
}

/// The definitional double check: iterate every assignment of the `2r + 1`
/// blocks over `[n]`, keep the valid encodings, and sum their weights.
/// Exponential in `n`; tests use it to pin the fast walk down.
pub fn path_encoding_sum_exhaustive(
    rec: &LinRecOf<MultiPoly>,
    n: i64,
    values: &[BigInt],
) -> Result<BigInt, ConstructError> {
    if rec.base != 1 {
        return Err(ConstructError::BaseMustBeOne(rec.base));
    }
    if n < 1 {
        return Err(ConstructError::IndexOutOfRange(n));
    }
    let n = n as usize;
    let r = rec.order();
    let blocks = 2 * r + 1;
    let assignments = (blocks as u64).checked_pow(n as u32).ok_or(
        ConstructError::BruteSpaceTooLarge {
            bits: u64::MAX,
        },
    )?;
    if assignments > 1 << 26 {
        return Err(ConstructError::BruteSpaceTooLarge { bits: assignments });
    }
    let coeff_vals: Vec<BigInt> = rec.coeffs.iter().map(|p| p.eval(values)).collect();
    let initial_vals: Vec<BigInt> = rec.initials[..r].iter().map(|p| p.eval(values)).collect();

    let mut total = BigInt::zero();
    for code in 0..assignments {
        let mut enc = PathEncoding {
            n,
            order: r,
            step_blocks: vec![0; r],
            initial_blocks: vec![0; r],
            skipped: 0,
        };
        let mut rest = code;
        for e in 0..n {
            let b = (rest % blocks as u64) as usize;
            rest /= blocks as u64;
            if b < r {
                enc.step_blocks[b] |= 1 << e;
            } else if b < 2 * r {
                enc.initial_blocks[b - r] |= 1 << e;
            } else {
                enc.skipped |= 1 << e;
            }
        }
        if !is_valid_path_encoding(&enc) {
            continue;
        }
        let mut weight = BigInt::one();
        for (i, mask) in enc.step_blocks.iter().enumerate() {
            for _ in 0..mask.count_ones() {
                weight *= &coeff_vals[i];
            }
        }
        for (i, mask) in enc.initial_blocks.iter().enumerate() {
            for _ in 0..mask.count_ones() {
                weight *= &initial_vals[i];
            }
        }
        total += weight;
    }
    Ok(total)
}

/// The path-encoding counting problem as a symbolic Specker polynomial:
/// indeterminates `z_1..z_r` weight the step blocks and `z_{r+1}..z_{2r}`
/// the initial blocks; evaluating at the recurrence's coefficients and
/// initial conditions recovers the recurrence value.
pub fn recurrence_tree_polynomial(r: usize) -> SpeckerPolynomial {
    let mut triples: Vec<(String, usize, bool)> = Vec::new();
    for i in 1..=r {
        triples.push((format!("u{i}"), 1, true));
    }
    for i in 1..=r {
        triples.push((format!("i{i}"), 1, true));
    }
    triples.push(("s".to_string(), 1, true));
    let refs: Vec<(&str, usize, bool)> = triples
        .iter()
        .map(|(n, a, c)| (n.as_str(), *a, *c))
        .collect();
    let vocab = Vocabulary::from_triples(&refs);

    let mut factors = Vec::new();
    for i in 1..=r {
        factors.push(Factor {
            position: PositionPred::InSymbol(format!("u{i}")),
            monomial: MultiPoly::var(2 * r, i - 1),
        });
    }
    for i in 1..=r {
        factors.push(Factor {
            position: PositionPred::InSymbol(format!("i{i}")),
            monomial: MultiPoly::var(2 * r, r + i - 1),
        });
    }
    SpeckerPolynomial {
        vocab,
        ordered: true,
        guard: vec![GuardClause::RecPath { order: r }],
        factors,
        nvars: 2 * r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{eval_linrec, LinRec};

    fn poly_rec(coeffs: &[i64], initials: &[i64]) -> LinRecOf<MultiPoly> {
        LinRecOf::new(
            coeffs.iter().map(|&c| MultiPoly::constant(0, c)).collect(),
            initials.iter().map(|&c| MultiPoly::constant(0, c)).collect(),
        )
        .with_base(1)
    }

    #[test]
    fn fibonacci_paths_at_eight() {
        let rec = poly_rec(&[1, 1], &[1, 1]);
        assert_eq!(
            encode_recurrence_paths(&rec, 8, &[]).unwrap(),
            BigInt::from(21)
        );
    }

    #[test]
    fn single_path_recurrence() {
        // A(n) = A(n-1), A(1) = 7: one path, weight 7
        let rec = poly_rec(&[1], &[7]);
        assert_eq!(
            encode_recurrence_paths(&rec, 5, &[]).unwrap(),
            BigInt::from(7)
        );
    }

    #[test]
    fn chebyshev_value_at_three() {
        // T(n+1) = 2x T(n) - T(n-1); indexed from 1 by A(1) = T_1 = x,
        // A(2) = T_2 = 2x^2 - 1, so the value at 3 is T_3
        let two_x = MultiPoly::monomial(1, 2, vec![1]);
        let t2 = MultiPoly::monomial(1, 2, vec![2]).add(&MultiPoly::constant(1, -1));
        let rec = LinRecOf::new(
            vec![two_x, MultiPoly::constant(1, -1)],
            vec![MultiPoly::var(1, 0), t2],
        )
        .with_base(1);
        assert_eq!(
            encode_recurrence_paths(&rec, 3, &[BigInt::from(2)]).unwrap(),
            BigInt::from(26)
        );
    }

    #[test]
    fn initial_segment_read_directly() {
        let rec = poly_rec(&[3, -2], &[3, 5]);
        assert_eq!(encode_recurrence_paths(&rec, 1, &[]).unwrap(), BigInt::from(3));
        assert_eq!(encode_recurrence_paths(&rec, 2, &[]).unwrap(), BigInt::from(5));
        assert!(matches!(
            encode_recurrence_paths(&rec, 0, &[]),
            Err(ConstructError::IndexOutOfRange(0))
        ));
    }

    #[test]
    fn exhaustive_assignment_sum_matches_walk() {
        for (coeffs, initials) in [
            (vec![1i64, 1], vec![1i64, 1]),
            (vec![3, -2], vec![3, 5]),
            (vec![2], vec![1]),
            (vec![0, 2], vec![1, 3]),
        ] {
            let rec = poly_rec(&coeffs, &initials);
            for n in 1..=7i64 {
                let walked = encode_recurrence_paths(&rec, n, &[]).unwrap();
                let exhaustive = path_encoding_sum_exhaustive(&rec, n, &[]).unwrap();
                assert_eq!(walked, exhaustive, "coeffs {coeffs:?} n={n}");
            }
        }
    }

    #[test]
    fn walk_matches_eval_linrec_small_grid() {
        for coeffs in [vec![1i64, 1], vec![2, -1], vec![3, -2], vec![1, 0, 2]] {
            for init_seed in 0..4i64 {
                let initials: Vec<i64> =
                    (0..coeffs.len() as i64).map(|i| (i + init_seed) % 4).collect();
                let prec = poly_rec(&coeffs, &initials);
                let irec = LinRec::from_i64(&coeffs, &initials).with_base(1);
                for n in 1..=12i64 {
                    assert_eq!(
                        encode_recurrence_paths(&prec, n, &[]).unwrap(),
                        eval_linrec(&irec, n).unwrap(),
                        "coeffs {coeffs:?} initials {initials:?} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn invalid_encodings_are_rejected() {
        // wrong initial block index: element 2 sitting in I_1
        let enc = PathEncoding {
            n: 3,
            order: 2,
            step_blocks: vec![0b100, 0],
            initial_blocks: vec![0b010, 0],
            skipped: 0b001,
        };
        assert!(!is_valid_path_encoding(&enc));
        // matching index is fine
        let good = PathEncoding {
            n: 3,
            order: 2,
            step_blocks: vec![0b100, 0],
            initial_blocks: vec![0, 0b010],
            skipped: 0b001,
        };
        assert!(is_valid_path_encoding(&good));
    }
}
