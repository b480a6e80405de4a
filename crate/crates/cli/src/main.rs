//! Command-line front end: counting, order sweeps, word compilation,
//! sequence tooling, recurrence detection, periodicity, the constructive
//! lanes, substitution-index experiments, and catalog verification.
//!
//! Exit codes: 0 success, 1 a verification lane disagreed, 2 usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use specker_core::catalog;
use specker_core::construct::{
    encode_recurrence_paths, eval_diff_with, recurrence_to_diff_representation,
};
use specker_core::counting::{check_coi, specker_count, CoiStrategy, CountTask, DEFAULT_BUDGET};
use specker_core::index::{
    distinguish, index_lower_bound, ClassOracle, EvenSizeClass, FormulaClass, IndexError,
    PointedStructure, SearchLimits,
};
use specker_core::logic::{parse_formula, Formula, Structure, StructureJson, Vocabulary};
use specker_core::series::{
    detect_integer_recurrence, detect_periodicity_mod, eval_linrec, LinRec, LinRecOf, MultiPoly,
};
use specker_core::words::{compile_word_formula, count_words};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "specker",
    version,
    about = "Model counting for definable classes, word-automaton compilation, and recurrence detection"
)]
struct Cli {
    /// Worker threads for the counting lanes (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Count interpretations of the counted symbols satisfying a sentence
    Count(CountArgs),
    /// Sweep linear orders and compare counts
    CoiCheck(CoiArgs),
    /// Compile an ordered unary sentence to a minimal DFA
    Compile(CompileArgs),
    /// Print catalog sequences and metadata
    Seq(SeqArgs),
    /// Detect the minimal integer recurrence of a sequence
    Recurrence(RecurrenceArgs),
    /// Detect ultimate periodicity modulo m within a horizon
    Periodicity(PeriodicityArgs),
    /// Evaluate a recurrence as a sum over recurrence-tree paths
    Construct(ConstructArgs),
    /// Represent a recurrence as a difference of two counting problems
    DiffRepr(DiffReprArgs),
    /// Search substitution contexts and bound the substitution index
    Index(IndexArgs),
    /// Run all verification lanes of a catalog entry
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CountArgs {
    /// Vocabulary JSON file
    #[arg(long)]
    vocab: PathBuf,
    /// Sentence file (S-expression)
    #[arg(long)]
    formula: PathBuf,
    #[arg(long)]
    n: usize,
    /// "natural" or a comma-separated permutation, least element first
    #[arg(long)]
    order: Option<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Fixed interpretation file (structure JSON) for uncounted symbols
    #[arg(long)]
    fixed: Option<PathBuf>,
}

#[derive(Args)]
struct CoiArgs {
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long)]
    formula: PathBuf,
    #[arg(long)]
    n: usize,
    /// exhaustive (all n! orders, n <= 5) or sampled
    #[arg(long, default_value = "exhaustive")]
    strategy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long)]
    formula: PathBuf,
    /// Write the DFA JSON here as well
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also report counts up to this length
    #[arg(long)]
    count_to: Option<usize>,
}

#[derive(Args)]
struct SeqArgs {
    #[arg(long)]
    entry: Option<String>,
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    /// List registered entries
    #[arg(long)]
    list: bool,
    /// Print entry metadata instead of values
    #[arg(long)]
    meta: bool,
}

#[derive(Args)]
struct RecurrenceArgs {
    /// Sequence JSON file {"base":int,"terms":["...",...]}
    #[arg(long)]
    input: Option<PathBuf>,
    /// Catalog entry to read the prefix from
    #[arg(long)]
    entry: Option<String>,
    #[arg(long, default_value_t = 16)]
    max_n: usize,
}

#[derive(Args)]
struct PeriodicityArgs {
    #[arg(long)]
    entry: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long = "mod")]
    modulus: u64,
    #[arg(long, default_value_t = 200)]
    horizon: usize,
}

#[derive(Args)]
struct ConstructArgs {
    /// Comma-separated integer coefficients a_1..a_r
    #[arg(long)]
    coeffs: String,
    /// Comma-separated initial values f(1)..f(r)
    #[arg(long)]
    initials: String,
    #[arg(long)]
    n: i64,
}

#[derive(Args)]
struct DiffReprArgs {
    #[arg(long)]
    coeffs: String,
    #[arg(long)]
    initials: String,
    /// Evaluate and cross-check for 1..=n
    #[arg(long)]
    n: Option<usize>,
    /// Write vocab.json, f1.sx, f2.sx and bundle.json into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IndexArgs {
    /// "even-size" or "entry:NAME" (membership by the entry's sentence)
    #[arg(long)]
    class: String,
    #[arg(long, default_value_t = 3)]
    size: usize,
    #[arg(long, default_value_t = 3)]
    bound: usize,
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    /// Distinguish two structures from files instead of bounding the index
    #[arg(long)]
    a: Option<PathBuf>,
    #[arg(long)]
    b: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    entry: String,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
}

enum CliError {
    Usage(String),
    Mismatch(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || run_command(&cli.command);

    let result = match cli.workers {
        Some(w) if w >= 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .expect("thread pool");
            pool.install(run)
        }
        Some(_) => Err(usage("--workers must be at least 1")),
        None => run(),
    };

    match result {
        Ok(value) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&value).expect("serialize")),
                Format::Table => print_table(&value),
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Mismatch(msg)) => {
            eprintln!("verification mismatch: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_table(value: &Value) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                println!("{k}: {}", compact(v));
            }
        }
        other => println!("{}", compact(other)),
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

fn run_command(command: &Command) -> Result<Value, CliError> {
    match command {
        Command::Count(args) => cmd_count(args),
        Command::CoiCheck(args) => cmd_coi(args),
        Command::Compile(args) => cmd_compile(args),
        Command::Seq(args) => cmd_seq(args),
        Command::Recurrence(args) => cmd_recurrence(args),
        Command::Periodicity(args) => cmd_periodicity(args),
        Command::Construct(args) => cmd_construct(args),
        Command::DiffRepr(args) => cmd_diff_repr(args),
        Command::Index(args) => cmd_index(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_vocab(path: &Path) -> Result<Vocabulary, CliError> {
    Vocabulary::from_json(&read_file(path)?)
        .map_err(|e| usage(format!("bad vocabulary {}: {e}", path.display())))
}

fn load_formula(path: &Path, vocab: &Vocabulary) -> Result<Formula, CliError> {
    parse_formula(read_file(path)?.trim(), vocab)
        .map_err(|e| usage(format!("bad formula {}: {e}", path.display())))
}

fn parse_order(text: &str, n: usize) -> Result<Option<Vec<u32>>, CliError> {
    if text == "natural" {
        return Ok(None);
    }
    let seq: Vec<u32> = text
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage("order must be 'natural' or comma-separated elements"))?;
    if seq.len() != n {
        return Err(usage(format!("order lists {} elements, need {n}", seq.len())));
    }
    Ok(Some(seq))
}

fn parse_i64_list(text: &str, what: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("{what} must be comma-separated integers")))
}

fn cmd_count(args: &CountArgs) -> Result<Value, CliError> {
    let vocab = load_vocab(&args.vocab)?;
    let phi = load_formula(&args.formula, &vocab)?;
    let mut task = CountTask::new(&vocab, &phi, args.n).with_budget(args.budget);
    if let Some(path) = &args.fixed {
        let sj: StructureJson = serde_json::from_str(&read_file(path)?)
            .map_err(|e| usage(format!("bad structure json: {e}")))?;
        for (name, tuples) in &sj.relations {
            task.fixed.insert(name.clone(), tuples.clone());
        }
    }
    if let Some(text) = &args.order {
        task = match parse_order(text, args.n)? {
            None => task.ordered_natural(),
            Some(seq) => task.ordered_with(seq),
        };
    }
    let count = specker_count(&task).map_err(|e| usage(format!("counting failed: {e}")))?;
    Ok(json!({ "n": args.n, "count": count.to_string() }))
}

fn cmd_coi(args: &CoiArgs) -> Result<Value, CliError> {
    let vocab = load_vocab(&args.vocab)?;
    let phi = load_formula(&args.formula, &vocab)?;
    let task = CountTask::new(&vocab, &phi, args.n)
        .with_budget(args.budget)
        .ordered_natural();
    let strategy = match args.strategy.as_str() {
        "exhaustive" => CoiStrategy::Exhaustive,
        "sampled" => CoiStrategy::Sampled { seed: args.seed },
        other => return Err(usage(format!("unknown strategy '{other}'"))),
    };
    let report = check_coi(&task, strategy).map_err(|e| usage(format!("sweep failed: {e}")))?;
    let value = serde_json::to_value(report.to_json_struct()).expect("serialize");
    if report.is_invariant() {
        Ok(value)
    } else {
        println!("{}", serde_json::to_string(&value).expect("serialize"));
        Err(CliError::Mismatch("counts differ across orders".into()))
    }
}

fn cmd_compile(args: &CompileArgs) -> Result<Value, CliError> {
    let vocab = load_vocab(&args.vocab)?;
    let phi = load_formula(&args.formula, &vocab)?;
    let dfa = compile_word_formula(&phi, &vocab)
        .map_err(|e| usage(format!("compilation failed: {e}")))?;
    let dj = dfa.to_json_struct();
    if let Some(path) = &args.out {
        fs::write(path, serde_json::to_string(&dj).expect("serialize"))
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut out = serde_json::to_value(&dj).expect("serialize");
    if let Some(hi) = args.count_to {
        let counts: Vec<String> = (0..=hi).map(|n| count_words(&dfa, n).to_string()).collect();
        out["counts"] = json!(counts);
    }
    Ok(out)
}

fn cmd_seq(args: &SeqArgs) -> Result<Value, CliError> {
    if args.list {
        return Ok(json!({ "entries": catalog::list_entries() }));
    }
    let name = args
        .entry
        .as_ref()
        .ok_or_else(|| usage("--entry or --list required"))?;
    let entry = catalog::get_entry(name).map_err(|e| usage(e.to_string()))?;
    if args.meta {
        return Ok(serde_json::to_value(entry.meta()).expect("serialize"));
    }
    let terms: Vec<String> = entry
        .sequence(args.max_n)
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    Ok(json!({ "entry": name, "base": entry.base, "terms": terms }))
}

fn cmd_recurrence(args: &RecurrenceArgs) -> Result<Value, CliError> {
    let (base, prefix): (i64, Vec<BigInt>) = match (&args.input, &args.entry) {
        (Some(path), None) => {
            let v: Value = serde_json::from_str(&read_file(path)?)
                .map_err(|e| usage(format!("bad sequence json: {e}")))?;
            let base = v["base"].as_i64().unwrap_or(0);
            let terms = v["terms"]
                .as_array()
                .ok_or_else(|| usage("sequence json needs a terms array"))?
                .iter()
                .map(|t| {
                    t.as_str()
                        .and_then(|s| s.parse::<BigInt>().ok())
                        .ok_or_else(|| usage("terms must be decimal strings"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (base, terms)
        }
        (None, Some(name)) => {
            let entry = catalog::get_entry(name).map_err(|e| usage(e.to_string()))?;
            let terms = entry
                .sequence(args.max_n)
                .into_iter()
                .map(|(_, v)| v.parse::<BigInt>().expect("decimal"))
                .collect();
            (entry.base as i64, terms)
        }
        _ => return Err(usage("exactly one of --input or --entry required")),
    };
    match detect_integer_recurrence(&prefix) {
        Ok(mut rec) => {
            rec.base = base;
            let j = rec
                .to_json_struct()
                .map_err(|e| usage(format!("cannot serialize recurrence: {e}")))?;
            Ok(json!({
                "detected": true,
                "coeffs": j.coeffs,
                "order": rec.order(),
                "preperiod": rec.preperiod,
                "initials": j.initials,
                "base": j.base,
            }))
        }
        Err(e) => Ok(json!({ "detected": false, "reason": e.to_string() })),
    }
}

fn cmd_periodicity(args: &PeriodicityArgs) -> Result<Value, CliError> {
    if args.modulus < 2 {
        return Err(usage("--mod must be at least 2"));
    }
    if args.horizon < 4 {
        return Err(usage("--horizon must be at least 4"));
    }
    let residues: Vec<u64> = match (&args.entry, &args.input) {
        (Some(name), None) => catalog::entry_residues(name, args.modulus, args.horizon + 1)
            .map_err(|e| usage(e.to_string()))?,
        (None, Some(path)) => {
            let v: Value = serde_json::from_str(&read_file(path)?)
                .map_err(|e| usage(format!("bad sequence json: {e}")))?;
            v["terms"]
                .as_array()
                .ok_or_else(|| usage("sequence json needs a terms array"))?
                .iter()
                .map(|t| {
                    t.as_str()
                        .and_then(|s| s.parse::<BigInt>().ok())
                        .map(|b| {
                            let m = BigInt::from(args.modulus);
                            let r = ((&b % &m) + &m) % &m;
                            u64::try_from(r).unwrap_or(0)
                        })
                        .ok_or_else(|| usage("terms must be decimal strings"))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        _ => return Err(usage("exactly one of --entry or --input required")),
    };
    if residues.len() <= args.horizon {
        return Err(usage(format!(
            "need {} residues, have {}",
            args.horizon + 1,
            residues.len()
        )));
    }
    let report = detect_periodicity_mod(&residues, args.modulus, args.horizon);
    Ok(serde_json::to_value(&report).expect("serialize"))
}

fn base1_rec(coeffs_text: &str, initials_text: &str) -> Result<LinRec, CliError> {
    let coeffs = parse_i64_list(coeffs_text, "--coeffs")?;
    let initials = parse_i64_list(initials_text, "--initials")?;
    if coeffs.is_empty() || initials.len() != coeffs.len() {
        return Err(usage(
            "--initials must list exactly one value per coefficient",
        ));
    }
    Ok(LinRec::from_i64(&coeffs, &initials).with_base(1))
}

fn cmd_construct(args: &ConstructArgs) -> Result<Value, CliError> {
    let rec = base1_rec(&args.coeffs, &args.initials)?;
    if args.n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    let poly_rec = LinRecOf::new(
        rec.coeffs
            .iter()
            .map(|c| MultiPoly::constant(0, c.clone()))
            .collect(),
        rec.initials
            .iter()
            .map(|c| MultiPoly::constant(0, c.clone()))
            .collect(),
    )
    .with_base(1);
    let by_paths = encode_recurrence_paths(&poly_rec, args.n, &[])
        .map_err(|e| usage(format!("path evaluation failed: {e}")))?;
    let direct =
        eval_linrec(&rec, args.n).map_err(|e| usage(format!("evaluation failed: {e}")))?;
    let agree = by_paths == direct;
    let out = json!({
        "n": args.n,
        "path_sum": by_paths.to_string(),
        "direct": direct.to_string(),
        "agree": agree,
    });
    if agree {
        Ok(out)
    } else {
        println!("{}", serde_json::to_string(&out).expect("serialize"));
        Err(CliError::Mismatch(
            "path sum differs from direct evaluation".into(),
        ))
    }
}

fn cmd_diff_repr(args: &DiffReprArgs) -> Result<Value, CliError> {
    let rec = base1_rec(&args.coeffs, &args.initials)?;
    let repr = recurrence_to_diff_representation(&rec)
        .map_err(|e| usage(format!("construction failed: {e}")))?;
    let bundle = repr
        .to_bundle()
        .map_err(|e| usage(format!("serialization failed: {e}")))?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)
            .map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
        let write = |name: &str, contents: String| -> Result<(), CliError> {
            fs::write(dir.join(name), contents)
                .map_err(|e| usage(format!("cannot write {name}: {e}")))
        };
        write("vocab.json", repr.vocab.to_json())?;
        write("f1.sx", repr.f1.to_sexpr())?;
        write("f2.sx", repr.f2.to_sexpr())?;
        write(
            "bundle.json",
            serde_json::to_string(&bundle).expect("serialize"),
        )?;
    }
    let mut out = json!({
        "order": repr.target.order(),
        "blocks": repr.block_count,
        "symbols": repr.vocab.symbols().len(),
        "f1": repr.f1.to_sexpr(),
        "f2": repr.f2.to_sexpr(),
    });
    if let Some(hi) = args.n {
        let compiled = repr
            .compile()
            .map_err(|e| usage(format!("compilation failed: {e}")))?;
        let mut values = Vec::new();
        for n in 1..=hi {
            let got = eval_diff_with(&repr, &compiled, n)
                .map_err(|e| CliError::Mismatch(format!("lane disagreement: {e}")))?;
            let expected = eval_linrec(&repr.target, n as i64).expect("above base");
            if got != expected {
                println!("{}", serde_json::to_string(&out).expect("serialize"));
                return Err(CliError::Mismatch(format!(
                    "difference {got} differs from target {expected} at n={n}"
                )));
            }
            values.push(got.to_string());
        }
        out["values"] = json!(values);
    }
    Ok(out)
}

fn cmd_index(args: &IndexArgs) -> Result<Value, CliError> {
    let limits = SearchLimits {
        bound: args.bound,
        cap: args.cap,
    };
    if args.class == "even-size" {
        let vocab = Vocabulary::from_triples(&[("E", 2, true)]);
        let class = EvenSizeClass::new(vocab);
        run_index(args, &class, limits)
    } else if let Some(name) = args.class.strip_prefix("entry:") {
        let entry = catalog::get_entry(name).map_err(|e| usage(e.to_string()))?;
        let (vocab, phi) = entry
            .formula
            .ok_or_else(|| usage(format!("entry '{name}' has no membership sentence")))?;
        if entry.ordered {
            return Err(usage(
                "index experiments need an unordered membership sentence",
            ));
        }
        let class = FormulaClass::new(vocab, phi).map_err(|e| usage(format!("bad class: {e}")))?;
        run_index(args, &class, limits)
    } else {
        Err(usage("--class must be 'even-size' or 'entry:NAME'"))
    }
}

fn run_index<C: ClassOracle + Sync>(
    args: &IndexArgs,
    class: &C,
    limits: SearchLimits,
) -> Result<Value, CliError> {
    let describe = |e: IndexError| usage(format!("search failed: {e}"));
    match (&args.a, &args.b) {
        (Some(pa), Some(pb)) => {
            let a = load_structure(pa, class.vocabulary())?;
            let b = load_structure(pb, class.vocabulary())?;
            let found: Option<PointedStructure> =
                distinguish(class, &a, &b, limits).map_err(describe)?;
            Ok(match found {
                Some(ctx) => json!({
                    "distinguished": true,
                    "context": ctx.structure.to_json_value(Some(ctx.point)),
                }),
                None => json!({ "distinguished": false, "bound": args.bound }),
            })
        }
        (None, None) => {
            let bound = index_lower_bound(class, args.size, limits).map_err(describe)?;
            Ok(json!({
                "class": args.class,
                "size": args.size,
                "bound": args.bound,
                "lower_bound": bound,
            }))
        }
        _ => Err(usage("--a and --b must be given together")),
    }
}

fn load_structure(path: &Path, vocab: &Vocabulary) -> Result<Structure, CliError> {
    let sj: StructureJson = serde_json::from_str(&read_file(path)?)
        .map_err(|e| usage(format!("bad structure json: {e}")))?;
    let (s, _) =
        Structure::from_json_value(&sj, vocab).map_err(|e| usage(format!("bad structure: {e}")))?;
    Ok(s)
}

fn cmd_verify(args: &VerifyArgs) -> Result<Value, CliError> {
    let report =
        catalog::verify_entry(&args.entry, args.max_n).map_err(|e| usage(e.to_string()))?;
    let value = serde_json::to_value(&report).expect("serialize");
    if report.all_pass() {
        Ok(value)
    } else {
        println!("{}", serde_json::to_string(&value).expect("serialize"));
        Err(CliError::Mismatch(format!(
            "entry '{}' has failing lanes",
            args.entry
        )))
    }
}
