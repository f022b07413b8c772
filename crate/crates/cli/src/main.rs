//! The `rw` command: asymptotic inference, the exact finite oracle,
//! per-disjunct entropy reports, the zero-one decision procedure, and a
//! regression-corpus runner.
//!
//! Every subcommand prints one JSON object on stdout with a fixed field
//! order, so repeated runs with identical inputs are byte-identical.
//! Exit codes: 0 success, 2 input error, 3 undefined verdict (the report
//! is still emitted), 4 corpus failure.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rw_core::{
    canonicalize, compute01, compute_pr_inf, compute_pr_inf_with, count_worlds, limit_maxent,
    parse, parse_kb_text, parse_rational, pr_finite, Atom, AtomicDescription, BeliefKind, Disjunct,
    Formula, GenericCount, MaxEntResult, Tolerances, UndefinedReason, Vocabulary,
};

#[derive(Parser)]
#[command(name = "rw", version, about = "Degrees of belief from random worlds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Asymptotic degree of belief in a query given a KB file
    Infer(InferArgs),
    /// Exact finite-domain probabilities from the world-counting oracle
    Finite(FiniteArgs),
    /// Solution-space regions and their entropy maxima, per disjunct
    Maxent(MaxentArgs),
    /// Zero-one law decision for a closed first-order sentence
    Check01(Check01Args),
    /// Run a directory of regression cases against expectations and oracle
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct InferArgs {
    /// KB file with `predicates:`/`constants:` headers and one formula
    #[arg(long)]
    kb: PathBuf,
    /// Query formula over the KB's vocabulary
    #[arg(long)]
    query: String,
    /// Comma list of tolerance scales driving the τ⃗ → 0 analysis
    #[arg(long, default_value = "1e-2,1e-3,1e-4")]
    tau_grid: String,
}

#[derive(Args)]
struct FiniteArgs {
    #[arg(long)]
    kb: PathBuf,
    #[arg(long)]
    query: String,
    /// Comma list of domain sizes, one report row each
    #[arg(long)]
    n: String,
    /// Tolerance assignment `i=value` (rational or decimal), repeatable
    #[arg(long = "tau")]
    tau: Vec<String>,
}

#[derive(Args)]
struct MaxentArgs {
    #[arg(long)]
    kb: PathBuf,
    #[arg(long, default_value = "1e-2,1e-3,1e-4")]
    tau_grid: String,
}

#[derive(Args)]
struct Check01Args {
    /// Closed first-order sentence (no proportion comparisons)
    #[arg(long)]
    formula: String,
    /// Comma list of predicate names fixing the vocabulary
    #[arg(long)]
    predicates: String,
    /// Bitmask of active atoms (decimal, 0b... or 0x...); default: all
    #[arg(long)]
    active: Option<String>,
}

#[derive(Args)]
struct CorpusArgs {
    /// Directory holding *.case.json files and the KB files they name
    dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        return input_error(&msg);
    }
    let outcome = match cli.cmd {
        Cmd::Infer(a) => cmd_infer(a),
        Cmd::Finite(a) => cmd_finite(a),
        Cmd::Maxent(a) => cmd_maxent(a),
        Cmd::Check01(a) => cmd_check01(a),
        Cmd::Corpus(a) => cmd_corpus(a),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => input_error(&msg),
    }
}

fn input_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

/// Honor RW_THREADS before any rayon work starts. Absent or `0` means
/// sequential, the reproducible default.
fn configure_threads() -> Result<(), String> {
    let threads = match std::env::var("RW_THREADS") {
        Err(_) => 1,
        Ok(s) => {
            let v: usize = s
                .trim()
                .parse()
                .map_err(|_| format!("invalid RW_THREADS value `{s}`"))?;
            v.max(1)
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("thread pool: {e}"))
}

fn emit<T: Serialize>(report: &T) {
    let out = serde_json::to_string_pretty(report).expect("reports contain no non-finite floats");
    let mut stdout = std::io::stdout();
    writeln!(stdout, "{out}")
        .and_then(|()| stdout.flush())
        .expect("stdout");
}

// ---------------------------------------------------------------------------
// shared pieces

fn load_kb(path: &Path) -> Result<(Vocabulary, Formula), String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_kb_text(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_grid(spec: &str) -> Result<Vec<BigRational>, String> {
    let grid: Vec<BigRational> = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_rational)
        .collect::<Result<_, _>>()?;
    if grid.is_empty() {
        return Err("empty tolerance grid".into());
    }
    if grid.iter().any(|g| !g.is_positive()) {
        return Err("tolerance grid scales must be positive".into());
    }
    Ok(grid)
}

fn parse_tau_flags(flags: &[String]) -> Result<(Tolerances, BTreeMap<u32, String>), String> {
    let mut tol = Tolerances::zero();
    let mut shown = BTreeMap::new();
    for flag in flags {
        let (index, value) = flag
            .split_once('=')
            .ok_or_else(|| format!("expected i=value, got `{flag}`"))?;
        let index: u32 = index
            .trim()
            .parse()
            .map_err(|_| format!("bad tolerance index in `{flag}`"))?;
        if index == 0 {
            return Err("tolerance indices start at 1".into());
        }
        let value = parse_rational(value)?;
        if value.is_negative() {
            return Err(format!("negative tolerance in `{flag}`"));
        }
        shown.insert(index, rational_str(&value));
        tol = tol.with(index, value);
    }
    Ok((tol, shown))
}

fn rational_str(r: &BigRational) -> String {
    r.to_string()
}

fn point_strings(point: &[f64]) -> Vec<String> {
    point.iter().map(|x| format!("{x:.9}")).collect()
}

fn reason_str(reason: &UndefinedReason) -> &'static str {
    match reason {
        UndefinedReason::DegenerateKb => "DEGENERATE_KB",
        UndefinedReason::IllConditionedLimit => "ILL_CONDITIONED_LIMIT",
    }
}

#[derive(Serialize)]
#[serde(tag = "kind")]
enum VerdictJson {
    #[serde(rename = "POINT")]
    Point { value: f64 },
    #[serde(rename = "ZERO_ONE")]
    ZeroOne { value: bool },
    #[serde(rename = "TIE_INTERVAL")]
    TieInterval { lo: f64, hi: f64 },
    #[serde(rename = "UNDEFINED")]
    Undefined { reason: String },
}

fn verdict_json(kind: &BeliefKind) -> VerdictJson {
    match kind {
        BeliefKind::Point(v) => VerdictJson::Point { value: *v },
        BeliefKind::ZeroOne(b) => VerdictJson::ZeroOne { value: *b },
        BeliefKind::TieInterval(lo, hi) => VerdictJson::TieInterval { lo: *lo, hi: *hi },
        BeliefKind::Undefined(r) => VerdictJson::Undefined {
            reason: reason_str(r).into(),
        },
    }
}

fn render_verdict(kind: &BeliefKind) -> String {
    match kind {
        BeliefKind::Point(v) => format!("POINT {v:.9}"),
        BeliefKind::ZeroOne(b) => format!("ZERO_ONE {}", u8::from(*b)),
        BeliefKind::TieInterval(lo, hi) => format!("TIE_INTERVAL {lo:.9} {hi:.9}"),
        BeliefKind::Undefined(r) => format!("UNDEFINED {}", reason_str(r)),
    }
}

// ---------------------------------------------------------------------------
// rw infer

#[derive(Serialize)]
struct InferReport {
    kb: String,
    query: String,
    tau_grid: Vec<String>,
    verdict: VerdictJson,
    entropy: Option<f64>,
    winners: Vec<WinnerJson>,
    groups: Vec<GroupJson>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct WinnerJson {
    disjunct: usize,
    entropy: f64,
    point: Vec<String>,
    weight: f64,
}

#[derive(Serialize)]
struct GroupJson {
    point: Vec<String>,
    disjuncts: Vec<usize>,
    weights: Vec<f64>,
    probabilities: Vec<f64>,
    lo: f64,
    hi: f64,
}

fn cmd_infer(a: InferArgs) -> Result<ExitCode, String> {
    let (vocab, kb) = load_kb(&a.kb)?;
    let query = parse(&a.query, &vocab).map_err(|e| format!("query: {e}"))?;
    let grid = parse_grid(&a.tau_grid)?;
    let belief = compute_pr_inf_with(&query, &kb, &vocab, &grid).map_err(|e| e.to_string())?;
    let report = InferReport {
        kb: a.kb.display().to_string(),
        query: query.to_string(),
        tau_grid: grid.iter().map(rational_str).collect(),
        verdict: verdict_json(&belief.kind),
        entropy: belief.entropy,
        winners: belief
            .winners
            .iter()
            .map(|w| WinnerJson {
                disjunct: w.disjunct,
                entropy: w.value,
                point: point_strings(&w.point),
                weight: w.weight,
            })
            .collect(),
        groups: belief
            .groups
            .iter()
            .map(|g| GroupJson {
                point: point_strings(&g.point),
                disjuncts: g.disjuncts.clone(),
                weights: g.weights.clone(),
                probabilities: g.probabilities.clone(),
                lo: g.lo,
                hi: g.hi,
            })
            .collect(),
        notes: belief.notes.clone(),
    };
    emit(&report);
    Ok(if matches!(belief.kind, BeliefKind::Undefined(_)) {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

// ---------------------------------------------------------------------------
// rw finite

#[derive(Serialize)]
struct FiniteReport {
    kb: String,
    query: String,
    tau: BTreeMap<u32, String>,
    rows: Vec<FiniteRow>,
}

#[derive(Serialize)]
struct FiniteRow {
    n: u64,
    kb_models: String,
    query_models: String,
    value: Option<String>,
    value_f64: Option<f64>,
}

/// Largest N the exact oracle handles in reasonable time, by atom count.
fn finite_bound(k: usize) -> u64 {
    match k {
        0..=2 => 500,
        3..=4 => 60,
        5..=8 => 24,
        _ => 12,
    }
}

fn cmd_finite(a: FiniteArgs) -> Result<ExitCode, String> {
    let (vocab, kb) = load_kb(&a.kb)?;
    let query = parse(&a.query, &vocab).map_err(|e| format!("query: {e}"))?;
    let ns: Vec<u64> =
        a.n.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| format!("bad domain size `{s}`"))
            })
            .collect::<Result<_, _>>()?;
    if ns.is_empty() {
        return Err("no domain sizes given".into());
    }
    let bound = finite_bound(vocab.atom_count());
    if let Some(&n) = ns.iter().find(|&&n| n > bound) {
        return Err(format!(
            "N = {n} exceeds the bound {bound} for {} atoms",
            vocab.atom_count()
        ));
    }
    let (tol, tau_shown) = parse_tau_flags(&a.tau)?;
    let both = Formula::and(kb.clone(), query.clone());
    let rows = ns
        .iter()
        .map(|&n| {
            let kb_models = count_worlds(&kb, &vocab, n, &tol);
            let query_models = count_worlds(&both, &vocab, n, &tol);
            let value = (!kb_models.is_zero()).then(|| {
                BigRational::new(
                    BigInt::from(query_models.clone()),
                    BigInt::from(kb_models.clone()),
                )
            });
            FiniteRow {
                n,
                kb_models: kb_models.to_string(),
                query_models: query_models.to_string(),
                value_f64: value.as_ref().and_then(ToPrimitive::to_f64),
                value: value.as_ref().map(rational_str),
            }
        })
        .collect();
    let report = FiniteReport {
        kb: a.kb.display().to_string(),
        query: query.to_string(),
        tau: tau_shown,
        rows,
    };
    emit(&report);
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// rw maxent

#[derive(Serialize)]
struct MaxentReport {
    kb: String,
    tau_grid: Vec<String>,
    atoms: Vec<String>,
    quantifier_rank: u32,
    disjuncts: Vec<DisjunctJson>,
}

#[derive(Serialize)]
struct DisjunctJson {
    index: usize,
    description: Vec<String>,
    pattern: Vec<String>,
    constraints: Vec<String>,
    closure: Option<SolveJson>,
    grid: Vec<GridRowJson>,
    extrapolated: Option<f64>,
    agreement: bool,
    value: Option<f64>,
}

#[derive(Serialize)]
struct SolveJson {
    point: Vec<String>,
    entropy: f64,
    feasibility_residual: f64,
    boundary: bool,
}

#[derive(Serialize)]
struct GridRowJson {
    tau_scale: f64,
    solve: Option<SolveJson>,
}

fn solve_json(r: &MaxEntResult) -> SolveJson {
    SolveJson {
        point: point_strings(&r.point),
        entropy: r.value,
        feasibility_residual: r.feasibility_residual,
        boundary: r.boundary_flag,
    }
}

fn describe(desc: &AtomicDescription, vocab: &Vocabulary) -> Vec<String> {
    (0..desc.class_count)
        .map(|class| {
            let names: Vec<&str> = desc
                .constants
                .iter()
                .zip(&desc.class_of)
                .filter(|&(_, &c)| c == class)
                .map(|(name, _)| name.as_str())
                .collect();
            format!(
                "{} -> {}",
                names.join("="),
                Atom(desc.class_atom[class]).label(vocab)
            )
        })
        .collect()
}

fn pattern_strings(d: &Disjunct, vocab: &Vocabulary) -> Vec<String> {
    d.counts_pattern
        .iter()
        .enumerate()
        .map(|(a, pat)| {
            let pat = match pat {
                GenericCount::Unconstrained => "any".into(),
                GenericCount::Exactly(j) => format!("={j}"),
                GenericCount::AtLeast(r) => format!(">={r}"),
            };
            format!("{}: {pat}", Atom(a).label(vocab))
        })
        .collect()
}

fn cmd_maxent(a: MaxentArgs) -> Result<ExitCode, String> {
    let (vocab, kb) = load_kb(&a.kb)?;
    let grid = parse_grid(&a.tau_grid)?;
    let cf = canonicalize(&kb, &vocab).map_err(|e| e.to_string())?;
    let disjuncts = cf
        .disjuncts
        .iter()
        .map(|d| {
            let lim = limit_maxent(&d.region, &grid);
            DisjunctJson {
                index: d.index,
                description: describe(&d.desc, &vocab),
                pattern: pattern_strings(d, &vocab),
                constraints: d
                    .region
                    .constraints
                    .iter()
                    .map(|c| {
                        if c.strict {
                            format!("{} (strict)", c.source)
                        } else {
                            c.source.clone()
                        }
                    })
                    .collect(),
                closure: lim.closure.as_ref().map(solve_json),
                grid: lim
                    .grid
                    .iter()
                    .map(|(scale, r)| GridRowJson {
                        tau_scale: *scale,
                        solve: r.as_ref().map(solve_json),
                    })
                    .collect(),
                extrapolated: lim.extrapolated,
                agreement: lim.agreement,
                value: lim.value,
            }
        })
        .collect();
    let report = MaxentReport {
        kb: a.kb.display().to_string(),
        tau_grid: grid.iter().map(rational_str).collect(),
        atoms: (0..vocab.atom_count())
            .map(|a| Atom(a).label(&vocab))
            .collect(),
        quantifier_rank: cf.rank,
        disjuncts,
    };
    emit(&report);
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// rw check01

#[derive(Serialize)]
struct Check01Report {
    formula: String,
    predicates: Vec<String>,
    active: String,
    bit: u8,
}

fn parse_mask(s: &str, k: usize) -> Result<u64, String> {
    let s = s.trim();
    let mask = if let Some(bits) = s.strip_prefix("0b") {
        u64::from_str_radix(bits, 2)
    } else if let Some(hex) = s.strip_prefix("0x") {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    }
    .map_err(|_| format!("bad atom mask `{s}`"))?;
    let all = all_atoms(k);
    if mask & !all != 0 {
        return Err(format!(
            "mask `{s}` names atoms beyond the {k} the vocabulary has"
        ));
    }
    Ok(mask)
}

fn all_atoms(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn cmd_check01(a: Check01Args) -> Result<ExitCode, String> {
    let predicates: Vec<String> = a
        .predicates
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let vocab = Vocabulary::new(predicates, Vec::<String>::new()).map_err(|e| e.to_string())?;
    let phi = parse(&a.formula, &vocab).map_err(|e| format!("formula: {e}"))?;
    let k = vocab.atom_count();
    let active = match &a.active {
        None => all_atoms(k),
        Some(s) => parse_mask(s, k)?,
    };
    let no_names = AtomicDescription {
        constants: Vec::new(),
        class_of: Vec::new(),
        class_count: 0,
        class_atom: Vec::new(),
    };
    let bit = compute01(&phi, active, &no_names, &vocab).map_err(|e| e.to_string())?;
    let report = Check01Report {
        formula: phi.to_string(),
        predicates: vocab.predicates().to_vec(),
        active: format!("{active:#b}"),
        bit: u8::from(bit),
    };
    emit(&report);
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// rw corpus

#[derive(Deserialize)]
struct CaseFile {
    name: String,
    kb: String,
    query: String,
    expected: ExpectedJson,
    #[serde(default)]
    oracle: Option<OracleJson>,
}

#[derive(Deserialize)]
#[serde(tag = "kind")]
enum ExpectedJson {
    #[serde(rename = "POINT")]
    Point { value: String, tolerance: String },
    #[serde(rename = "ZERO_ONE")]
    ZeroOne { value: bool },
    #[serde(rename = "TIE_INTERVAL")]
    TieInterval {
        lo: String,
        hi: String,
        tolerance: String,
    },
    #[serde(rename = "UNDEFINED")]
    Undefined { reason: String },
}

/// Finite cross-check: `pr_finite` at each N in `ns`; the largest N must
/// land within `band` of `target` (`band` "0" demands exact equality).
/// With `unsat` set the KB must instead have no models at any listed N.
#[derive(Deserialize)]
struct OracleJson {
    ns: Vec<u64>,
    #[serde(default)]
    tau: BTreeMap<String, String>,
    #[serde(default)]
    target: Option<String>,
    #[serde(default)]
    band: Option<String>,
    #[serde(default)]
    unsat: bool,
}

#[derive(Serialize)]
struct CorpusReport {
    dir: String,
    total: usize,
    passed: usize,
    failed: usize,
    cases: Vec<CaseResult>,
}

#[derive(Serialize)]
struct CaseResult {
    name: String,
    status: String,
    expected: String,
    verdict: String,
    oracle: Option<String>,
    detail: Vec<String>,
}

fn fail_case(name: String, detail: String) -> CaseResult {
    CaseResult {
        name,
        status: "fail".into(),
        expected: String::new(),
        verdict: String::new(),
        oracle: None,
        detail: vec![detail],
    }
}

fn render_expected(e: &ExpectedJson) -> String {
    match e {
        ExpectedJson::Point { value, tolerance } => format!("POINT {value} ± {tolerance}"),
        ExpectedJson::ZeroOne { value } => format!("ZERO_ONE {}", u8::from(*value)),
        ExpectedJson::TieInterval { lo, hi, tolerance } => {
            format!("TIE_INTERVAL {lo} {hi} ± {tolerance}")
        }
        ExpectedJson::Undefined { reason } => format!("UNDEFINED {reason}"),
    }
}

fn check_expected(
    e: &ExpectedJson,
    kind: &BeliefKind,
    detail: &mut Vec<String>,
) -> Result<bool, String> {
    let to_f64 = |s: &String| -> Result<f64, String> {
        parse_rational(s)?
            .to_f64()
            .ok_or_else(|| format!("unrepresentable rational `{s}`"))
    };
    let ok = match (e, kind) {
        (ExpectedJson::Point { value, tolerance }, BeliefKind::Point(v)) => {
            let tol = to_f64(tolerance)?;
            if tol <= 0.0 {
                return Err("POINT tolerance must be positive".into());
            }
            (v - to_f64(value)?).abs() <= tol
        }
        (ExpectedJson::ZeroOne { value }, BeliefKind::ZeroOne(b)) => b == value,
        (ExpectedJson::TieInterval { lo, hi, tolerance }, BeliefKind::TieInterval(alo, ahi)) => {
            let tol = to_f64(tolerance)?;
            if tol <= 0.0 {
                return Err("TIE_INTERVAL tolerance must be positive".into());
            }
            (alo - to_f64(lo)?).abs() <= tol && (ahi - to_f64(hi)?).abs() <= tol
        }
        (ExpectedJson::Undefined { reason }, BeliefKind::Undefined(r)) => reason == reason_str(r),
        _ => false,
    };
    if !ok {
        detail.push(format!(
            "expected {}, got {}",
            render_expected(e),
            render_verdict(kind)
        ));
    }
    Ok(ok)
}

fn check_oracle(
    o: &OracleJson,
    kb: &Formula,
    query: &Formula,
    vocab: &Vocabulary,
    detail: &mut Vec<String>,
) -> Result<(bool, String), String> {
    if o.ns.is_empty() {
        return Err("oracle block lists no domain sizes".into());
    }
    let mut tol = Tolerances::zero();
    for (index, value) in &o.tau {
        let index: u32 = index
            .parse()
            .map_err(|_| format!("bad tolerance index `{index}`"))?;
        tol = tol.with(index, parse_rational(value)?);
    }
    let rows: Vec<(u64, Option<BigRational>)> =
        o.ns.iter()
            .map(|&n| (n, pr_finite(kb, query, vocab, n, &tol)))
            .collect();
    let rendered: Vec<String> = rows
        .iter()
        .map(|(n, p)| match p {
            Some(p) => format!("N={n}: {p}"),
            None => format!("N={n}: unsat"),
        })
        .collect();
    let summary = rendered.join("; ");

    if o.unsat {
        let ok = rows.iter().all(|(_, p)| p.is_none());
        if !ok {
            detail.push(format!(
                "expected an unsatisfiable KB, oracle found models: {summary}"
            ));
        }
        return Ok((ok, summary));
    }

    let target = parse_rational(o.target.as_deref().ok_or("oracle block needs a target")?)?;
    let band = parse_rational(o.band.as_deref().ok_or("oracle block needs a band")?)?;
    let (n, last) = rows.last().expect("ns nonempty");
    let ok = match last {
        None => {
            detail.push(format!("oracle found no models at N={n}"));
            false
        }
        Some(p) => {
            let ok = if band.is_zero() {
                *p == target
            } else {
                (p - &target).abs() <= band
            };
            if !ok {
                detail.push(format!(
                    "oracle value {p} at N={n} misses target {target} by more than {band}"
                ));
            }
            ok
        }
    };
    Ok((ok, format!("{summary} (target {target} ± {band} at N={n})")))
}

fn run_case(dir: &Path, path: &Path) -> CaseResult {
    let fallback = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail_case(fallback, format!("cannot read case: {e}")),
    };
    let case: CaseFile = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => return fail_case(fallback, format!("malformed case: {e}")),
    };
    let name = case.name.clone();
    let kb_text = match fs::read_to_string(dir.join(&case.kb)) {
        Ok(t) => t,
        Err(e) => return fail_case(name, format!("cannot read KB `{}`: {e}", case.kb)),
    };
    let (vocab, kb) = match parse_kb_text(&kb_text) {
        Ok(v) => v,
        Err(e) => return fail_case(name, format!("{}: {e}", case.kb)),
    };
    let query = match parse(&case.query, &vocab) {
        Ok(q) => q,
        Err(e) => return fail_case(name, format!("query: {e}")),
    };
    let belief = match compute_pr_inf(&query, &kb, &vocab) {
        Ok(b) => b,
        Err(e) => return fail_case(name, e.to_string()),
    };

    let mut detail = Vec::new();
    let verdict_ok = match check_expected(&case.expected, &belief.kind, &mut detail) {
        Ok(ok) => ok,
        Err(e) => return fail_case(name, e),
    };
    let (oracle_ok, oracle) = match &case.oracle {
        None => (true, None),
        Some(o) => match check_oracle(o, &kb, &query, &vocab, &mut detail) {
            Ok((ok, summary)) => (ok, Some(summary)),
            Err(e) => return fail_case(name, e),
        },
    };
    CaseResult {
        name,
        status: if verdict_ok && oracle_ok {
            "pass"
        } else {
            "fail"
        }
        .into(),
        expected: render_expected(&case.expected),
        verdict: render_verdict(&belief.kind),
        oracle,
        detail,
    }
}

fn cmd_corpus(a: CorpusArgs) -> Result<ExitCode, String> {
    let entries =
        fs::read_dir(&a.dir).map_err(|e| format!("cannot read {}: {e}", a.dir.display()))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .is_some_and(|n| n.to_string_lossy().ends_with(".case.json"))
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        eprintln!("warning: no *.case.json files in {}", a.dir.display());
    }

    let mut cases: Vec<CaseResult> = paths.par_iter().map(|p| run_case(&a.dir, p)).collect();

    let mut seen = std::collections::BTreeSet::new();
    for case in &mut cases {
        if !seen.insert(case.name.clone()) {
            case.status = "fail".into();
            case.detail
                .push(format!("duplicate case name `{}`", case.name));
        }
    }

    let failed = cases.iter().filter(|c| c.status == "fail").count();
    let report = CorpusReport {
        dir: a.dir.display().to_string(),
        total: cases.len(),
        passed: cases.len() - failed,
        failed,
        cases,
    };
    emit(&report);
    Ok(if failed > 0 {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    })
}
