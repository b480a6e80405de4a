//! Acceptance criterion 10: identical argv and seed produce byte-identical
//! JSON, across worker counts 1, 2 and 4 and across consecutive runs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_specker")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixtures() -> (PathBuf, PathBuf) {
    let dir = std::env::temp_dir().join("specker-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let vocab = dir.join("eq.json");
    let formula = dir.join("eq.sx");
    std::fs::write(
        &vocab,
        r#"{"symbols":[{"name":"E","arity":2,"counted":true}]}"#,
    )
    .unwrap();
    std::fs::write(
        &formula,
        "(and (and (forall x (rel E x x)) (forall x (forall y (implies (rel E x y) (rel E y x))))) \
         (forall x (forall y (forall z (implies (and (rel E x y) (rel E y z)) (rel E x z))))))",
    )
    .unwrap();
    (vocab, formula)
}

fn unary_fixtures() -> (PathBuf, PathBuf) {
    let dir = std::env::temp_dir().join("specker-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let vocab = dir.join("r.json");
    let formula = dir.join("minr.sx");
    std::fs::write(
        &vocab,
        r#"{"symbols":[{"name":"R","arity":1,"counted":true}]}"#,
    )
    .unwrap();
    std::fs::write(
        &formula,
        "(forall x (implies (not (exists y (< y x))) (rel R x)))",
    )
    .unwrap();
    (vocab, formula)
}

#[test]
fn criterion_10_byte_identical_json() {
    let (eq_vocab, eq_formula) = fixtures();
    let (r_vocab, r_formula) = unary_fixtures();
    let eqv = eq_vocab.to_str().unwrap();
    let eqf = eq_formula.to_str().unwrap();
    let rv = r_vocab.to_str().unwrap();
    let rf = r_formula.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["count", "--vocab", eqv, "--formula", eqf, "--n", "4"],
        vec![
            "coi-check", "--vocab", rv, "--formula", rf, "--n", "6", "--strategy", "sampled",
            "--seed", "11",
        ],
        vec!["compile", "--vocab", rv, "--formula", rf, "--count-to", "8"],
        vec!["seq", "--entry", "equivalence_relations", "--max-n", "8"],
        vec!["recurrence", "--entry", "fibonacci", "--max-n", "12"],
        vec!["periodicity", "--entry", "catalan", "--mod", "2", "--horizon", "64"],
        vec!["construct", "--coeffs", "1,1", "--initials", "1,1", "--n", "10"],
        vec!["diff-repr", "--coeffs", "3,-2", "--initials", "3,5", "--n", "5"],
        vec!["index", "--class", "even-size", "--size", "3", "--bound", "3"],
        vec!["verify", "--entry", "binary_relations", "--max-n", "3"],
    ];

    for base in &commands {
        let mut outputs = Vec::new();
        for workers in ["1", "2", "4"] {
            let mut args = base.clone();
            args.push("--workers");
            args.push(workers);
            let out = run(&args);
            assert!(
                out.status.success(),
                "{base:?} with {workers} workers failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            outputs.push(out.stdout);
        }
        // two consecutive runs with the same argv
        let mut args = base.clone();
        args.push("--workers");
        args.push("2");
        outputs.push(run(&args).stdout);

        for other in &outputs[1..] {
            assert_eq!(
                &outputs[0], other,
                "output of {base:?} varies across workers or runs"
            );
        }
    }
    println!(
        "criterion 10 PASS: {} commands byte-identical across 1, 2, 4 workers and repeated runs",
        commands.len()
    );
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["count", "--vocab", "/does/not/exist.json", "--formula", "/x", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["seq"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown flags are rejected
    let out = run(&["seq", "--entry", "fibonacci", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_subcommand_has_help() {
    for sub in [
        "count",
        "coi-check",
        "compile",
        "seq",
        "recurrence",
        "periodicity",
        "construct",
        "diff-repr",
        "index",
        "verify",
    ] {
        let out = run(&[sub, "--help"]);
        assert!(out.status.success(), "{sub} --help failed");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn spec_shaped_outputs() {
    let (eq_vocab, eq_formula) = fixtures();
    let out = run(&[
        "count",
        "--vocab",
        eq_vocab.to_str().unwrap(),
        "--formula",
        eq_formula.to_str().unwrap(),
        "--n",
        "4",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["count"], "15");

    let out = run(&["periodicity", "--entry", "catalan", "--mod", "2", "--horizon", "64"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"]["kind"], "no-period-found");

    let out = run(&["recurrence", "--entry", "fibonacci", "--max-n", "12"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["coeffs"], serde_json::json!([1, 1]));
    assert_eq!(v["order"], 2);
}
