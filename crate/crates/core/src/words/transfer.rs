use super::dfa::Dfa;
use super::WordsError;
use crate::series::{char_poly, detect_integer_recurrence, generate_terms, LinRec, LinRecOf, SeriesError};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

/// Letter-count matrix of a DFA: `m[q][q']` is the number of letters moving
/// `q` to `q'`. Every row sums to the alphabet size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    pub m: Vec<Vec<u64>>,
    pub initial: usize,
    pub accepting: Vec<bool>,
}

pub fn transfer_matrix(dfa: &Dfa) -> TransferMatrix {
    let states = dfa.num_states();
    let mut m = vec![vec![0u64; states]; states];
    for q in 0..states {
        for l in 0..dfa.alphabet_size() {
            m[q][dfa.next(q, l)] += 1;
        }
    }
    TransferMatrix {
        m,
        initial: dfa.initial(),
        accepting: (0..states).map(|q| dfa.is_accepting(q)).collect(),
    }
}

impl TransferMatrix {
    pub fn row_sums(&self) -> Vec<u64> {
        self.m.iter().map(|row| row.iter().sum()).collect()
    }
}

/// Number of accepted words of length `n`, by iterated vector-matrix
/// products over exact big integers.
pub fn count_words(dfa: &Dfa, n: usize) -> BigUint {
    let tm = transfer_matrix(dfa);
    let states = tm.m.len();
    let mut v = vec![BigUint::zero(); states];
    v[tm.initial] = BigUint::from(1u32);
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); states];
        for (q, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (t, &count) in tm.m[q].iter().enumerate() {
                if count != 0 {
                    next[t] += coeff * BigUint::from(count);
                }
            }
        }
        v = next;
    }
    v.iter()
        .zip(&tm.accepting)
        .filter(|&(_, &acc)| acc)
        .map(|(c, _)| c.clone())
        .sum()
}

/// Extract an integer linear recurrence for the accepted-word counts.
///
/// The minimal recurrence comes from Berlekamp-Massey on a prefix of length
/// `2 * states + 4`; when its coefficients fail integrality the recurrence
/// falls back to the characteristic polynomial of the transfer matrix, which
/// is certified by Cayley-Hamilton. Either way the result is validated
/// against `count_words` over the prefix plus sixteen further terms.
pub fn recurrence_from_dfa(dfa: &Dfa) -> Result<LinRec, WordsError> {
    let states = dfa.num_states();
    let prefix_len = 2 * states + 4;
    let prefix: Vec<BigInt> = (0..prefix_len)
        .map(|n| BigInt::from(count_words(dfa, n)))
        .collect();

    let candidate = match detect_integer_recurrence(&prefix) {
        Ok(rec) => rec,
        Err(SeriesError::NonIntegralRecurrence { .. })
        | Err(SeriesError::PrefixTooShort { .. }) => char_poly_recurrence(dfa, &prefix)?,
        Err(e) => return Err(e.into()),
    };

    // validation beyond the initial segment
    let check_len = candidate.order() + candidate.preperiod + 16;
    let generated = generate_terms(&candidate, check_len);
    for (n, value) in generated.iter().enumerate() {
        let reference = BigInt::from(count_words(dfa, n));
        if *value != reference {
            return Err(WordsError::ValidationFailed {
                context: "recurrence_from_dfa",
            });
        }
    }
    Ok(candidate)
}

fn char_poly_recurrence(dfa: &Dfa, prefix: &[BigInt]) -> Result<LinRec, WordsError> {
    let tm = transfer_matrix(dfa);
    let m: Vec<Vec<BigInt>> = tm
        .m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut coeffs = char_poly(&m);
    let mut preperiod = 0usize;
    while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()) == Some(true) {
        coeffs.pop();
        preperiod += 1;
    }
    let head = coeffs.len() + preperiod;
    if prefix.len() < head {
        return Err(WordsError::ValidationFailed {
            context: "char_poly_recurrence prefix",
        });
    }
    let mut rec = LinRecOf::new(coeffs, prefix[..head].to_vec());
    rec.preperiod = preperiod;
    Ok(rec)
}
