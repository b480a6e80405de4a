//! Emission of the path-encoding conditions as ordered sentences over unary
//! symbols. Elements are addressed through the order alone: "the element of
//! rank k", "the predecessor", "the maximum". The emitted conjunct list is
//! ordered so that the counting enumerator can prune early.

use crate::logic::Formula;

/// `v` has rank at most `r`: fewer than `r` elements lie below it.
pub(crate) fn rank_le(v: &str, r: usize) -> Formula {
    // not exists x1 < x2 < ... < xr < v
    let vars: Vec<String> = (1..=r).map(|i| format!("rk{i}")).collect();
    let mut clauses = Vec::new();
    for w in vars.windows(2) {
        clauses.push(Formula::lt(&w[0], &w[1]));
    }
    clauses.push(Formula::lt(vars.last().unwrap(), v));
    let mut body = Formula::conj(clauses);
    for var in vars.iter().rev() {
        body = Formula::exists(var, body);
    }
    Formula::not(body)
}

/// `v` is exactly the element of rank `k`.
pub(crate) fn rank_eq(v: &str, k: usize) -> Formula {
    if k == 1 {
        rank_le(v, 1)
    } else {
        Formula::and(rank_le(v, k), Formula::not(rank_le(v, k - 1)))
    }
}

/// `v` is the maximum of the order.
pub(crate) fn is_max(v: &str) -> Formula {
    Formula::not(Formula::exists("mx", Formula::lt(v, "mx")))
}

/// `w` is the immediate predecessor of `v`.
pub(crate) fn is_pred(w: &str, v: &str) -> Formula {
    Formula::and(
        Formula::lt(w, v),
        Formula::not(Formula::exists(
            "md",
            Formula::and(Formula::lt(w, "md"), Formula::lt("md", v)),
        )),
    )
}

fn member_of_any(v: &str, symbols: &[String]) -> Formula {
    Formula::disj(symbols.iter().map(|s| Formula::rel(s, &[v])).collect())
}

/// The validity conditions of the recurrence-tree path encoding, as one
/// conjunct list over counted unary symbols `u1..ur`, `i1..ir`, `s`:
/// the blocks partition the universe, the maximum starts the path, exactly
/// one initial element is reached and it sits at the rank matching its
/// block, no path step starts within the first `r` ranks, and each step of
/// size `i` skips `i - 1` elements into `s` and lands on the path again.
pub fn rec_path_formula(r: usize) -> Vec<Formula> {
    assert!(r >= 1);
    let u: Vec<String> = (1..=r).map(|i| format!("u{i}")).collect();
    let i_blocks: Vec<String> = (1..=r).map(|i| format!("i{i}")).collect();
    let all_path: Vec<String> = u
        .iter()
        .chain(i_blocks.iter())
        .cloned()
        .chain(std::iter::once("s".to_string()))
        .collect();
    let path_targets: Vec<String> = u.iter().chain(i_blocks.iter()).cloned().collect();

    let mut out = Vec::new();

    // pairwise disjointness
    for a in 0..all_path.len() {
        for b in (a + 1)..all_path.len() {
            out.push(Formula::forall(
                "v",
                Formula::not(Formula::and(
                    Formula::rel(&all_path[a], &["v"]),
                    Formula::rel(&all_path[b], &["v"]),
                )),
            ));
        }
    }

    // the k-th initial block may hold only the element of rank k
    for (k, name) in i_blocks.iter().enumerate() {
        out.push(Formula::forall(
            "v",
            Formula::implies(Formula::rel(name, &["v"]), rank_eq("v", k + 1)),
        ));
    }

    // no step starts within the first r ranks
    for name in &u {
        out.push(Formula::forall(
            "v",
            Formula::implies(Formula::rel(name, &["v"]), Formula::not(rank_le("v", r))),
        ));
    }

    // step condition: v in u_i steps down by i, skipping i-1 elements into s
    for (idx, name) in u.iter().enumerate() {
        let i = idx + 1;
        let chain: Vec<String> = (1..=i).map(|j| format!("w{j}")).collect();
        let mut body_clauses = Vec::new();
        body_clauses.push(is_pred(&chain[0], "v"));
        for j in 1..i {
            body_clauses.push(is_pred(&chain[j], &chain[j - 1]));
        }
        for skipped in chain.iter().take(i - 1) {
            body_clauses.push(Formula::rel("s", &[skipped]));
        }
        body_clauses.push(member_of_any(&chain[i - 1], &path_targets));
        let mut body = Formula::conj(body_clauses);
        for var in chain.iter().rev() {
            body = Formula::exists(var, body);
        }
        out.push(Formula::forall(
            "v",
            Formula::implies(Formula::rel(name, &["v"]), body),
        ));
    }

    // the path starts at the maximum
    out.push(Formula::forall(
        "v",
        Formula::implies(is_max("v"), member_of_any("v", &path_targets)),
    ));

    // exactly one initial element is reached
    out.push(Formula::exists(
        "v",
        Formula::and(
            member_of_any("v", &i_blocks),
            Formula::forall(
                "y",
                Formula::implies(member_of_any("y", &i_blocks), Formula::eq("y", "v")),
            ),
        ),
    ));

    // cover: every element is on the path, an initial element, or skipped
    out.push(Formula::forall("v", member_of_any("v", &all_path)));

    out
}
