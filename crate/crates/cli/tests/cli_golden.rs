//! Black-box tests of the `rw` binary: exit codes, report schemas, and
//! the documented failure modes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn rw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rw"))
        .args(args)
        .output()
        .expect("spawn rw")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON: {e}\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

#[test]
fn infer_emits_a_point_report() {
    let kb = corpus_dir().join("fly.kb");
    let out = rw(&[
        "infer",
        "--kb",
        kb.to_str().unwrap(),
        "--query",
        "Fly(tweety)",
    ]);
    assert_eq!(exit_code(&out), 0);
    let r = stdout_json(&out);
    assert_eq!(r["verdict"]["kind"], "POINT");
    assert!((r["verdict"]["value"].as_f64().unwrap() - 0.9).abs() <= 1e-9);
    assert_eq!(
        r["tau_grid"],
        serde_json::json!(["1/100", "1/1000", "1/10000"])
    );
    assert!(!r["winners"].as_array().unwrap().is_empty());
    assert!(!r["groups"].as_array().unwrap().is_empty());
    // winner points serialize as decimal strings
    let point = r["winners"][0]["point"][0].as_str().unwrap();
    assert!(point.parse::<f64>().is_ok(), "point coordinate `{point}`");
}

#[test]
fn infer_reports_ties_and_undefined_verdicts() {
    let tie = corpus_dir().join("tie.kb");
    let out = rw(&["infer", "--kb", tie.to_str().unwrap(), "--query", "P(c)"]);
    assert_eq!(exit_code(&out), 0);
    let r = stdout_json(&out);
    assert_eq!(r["verdict"]["kind"], "TIE_INTERVAL");
    assert!((r["verdict"]["lo"].as_f64().unwrap() - 0.2).abs() <= 1e-9);
    assert!((r["verdict"]["hi"].as_f64().unwrap() - 0.8).abs() <= 1e-9);

    let contra = corpus_dir().join("contradiction.kb");
    let out = rw(&["infer", "--kb", contra.to_str().unwrap(), "--query", "P(c)"]);
    assert_eq!(exit_code(&out), 3, "undefined verdicts exit 3");
    let r = stdout_json(&out);
    assert_eq!(r["verdict"]["kind"], "UNDEFINED");
    assert_eq!(r["verdict"]["reason"], "DEGENERATE_KB");
}

#[test]
fn input_errors_exit_two() {
    let kb = corpus_dir().join("fly.kb");
    let kb = kb.to_str().unwrap();
    for args in [
        vec!["infer", "--kb", "no-such-file.kb", "--query", "true"],
        vec!["infer", "--kb", kb, "--query", "Fly(tweety"],
        vec!["infer", "--kb", kb, "--query", "Swim(tweety)"],
        vec![
            "infer",
            "--kb",
            kb,
            "--query",
            "Fly(tweety)",
            "--tau-grid",
            "0",
        ],
        vec!["finite", "--kb", kb, "--query", "true", "--n", "nope"],
        vec![
            "finite", "--kb", kb, "--query", "true", "--n", "4", "--tau", "0=1/10",
        ],
        vec![
            "check01",
            "--formula",
            "[P(x)]_x ~(1) 1/2",
            "--predicates",
            "P",
        ],
        vec![
            "check01",
            "--formula",
            "exists x. P(x)",
            "--predicates",
            "P",
            "--active",
            "0b100",
        ],
        vec!["corpus", "no-such-dir"],
    ] {
        let out = rw(&args);
        assert_eq!(exit_code(&out), 2, "args {args:?}");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains("error"),
            "args {args:?} printed no error"
        );
    }
}

#[test]
fn finite_shows_exact_denominators() {
    let dir = tmp_dir("half-kb");
    let kb = dir.join("half.kb");
    fs::write(&kb, "predicates: P\n[P(x)]_x ~(1) 1/2\n").unwrap();
    let out = rw(&[
        "finite",
        "--kb",
        kb.to_str().unwrap(),
        "--query",
        "true",
        "--n",
        "4",
        "--tau",
        "1=0.1",
    ]);
    assert_eq!(exit_code(&out), 0);
    let r = stdout_json(&out);
    // at N = 4 and τ₁ = 1/10 only the #P = 2 worlds qualify: C(4, 2) = 6
    assert_eq!(r["rows"][0]["kb_models"], "6");
    assert_eq!(r["rows"][0]["value"], "1");
    assert_eq!(r["tau"]["1"], "1/10");
}

#[test]
fn finite_handles_unsatisfiable_queries_and_bounds() {
    let kb = corpus_dir().join("fly.kb");
    let kb = kb.to_str().unwrap();
    let out = rw(&[
        "finite",
        "--kb",
        kb,
        "--query",
        "Fly(tweety) and not Fly(tweety)",
        "--n",
        "3,10",
        "--tau",
        "1=1/20",
    ]);
    assert_eq!(exit_code(&out), 0);
    let r = stdout_json(&out);
    // N = 3 admits no KB models at all (no integer count hits the τ band),
    // so the conditional value is null rather than a made-up zero
    assert_eq!(r["rows"][0]["kb_models"], "0");
    assert_eq!(r["rows"][0]["value"], Value::Null);
    // N = 10 has models, and the contradictory query holds in none of them
    assert_eq!(r["rows"][1]["kb_models"], "60280");
    assert_eq!(r["rows"][1]["query_models"], "0");
    assert_eq!(r["rows"][1]["value"], "0");
    assert_eq!(r["rows"][1]["value_f64"], 0.0);

    let out = rw(&["finite", "--kb", kb, "--query", "true", "--n", "1000"]);
    assert_eq!(
        exit_code(&out),
        2,
        "size bound should reject N = 1000 on 4 atoms"
    );
}

#[test]
fn maxent_reports_regions_with_limits() {
    let kb = corpus_dir().join("dominance.kb");
    let out = rw(&["maxent", "--kb", kb.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let r = stdout_json(&out);
    assert_eq!(r["atoms"], serde_json::json!(["!P", "P"]));
    let disjuncts = r["disjuncts"].as_array().unwrap();
    assert!(!disjuncts.is_empty());
    // some disjunct attains the winning limit H(3/5) with a trusted value
    let best = disjuncts
        .iter()
        .filter_map(|d| d["value"].as_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    let expect = -(0.6f64 * 0.6f64.ln() + 0.4 * 0.4f64.ln());
    assert!(
        (best - expect).abs() <= 1e-7,
        "best limit {best} vs {expect}"
    );
    for d in disjuncts {
        assert!(d["constraints"].as_array().is_some());
        assert!(d["grid"].as_array().is_some());
    }
}

#[test]
fn check01_reports_the_bit() {
    let out = rw(&[
        "check01",
        "--formula",
        "exists x. (P(x) and Q(x))",
        "--predicates",
        "P,Q",
    ]);
    assert_eq!(exit_code(&out), 0);
    let r = stdout_json(&out);
    assert_eq!(r["bit"], 1);
    assert_eq!(r["active"], "0b1111");

    let out = rw(&[
        "check01",
        "--formula",
        "exists x. (P(x) and Q(x))",
        "--predicates",
        "P,Q",
        "--active",
        "0b0111",
    ]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // with the P∧Q atom inactive the sentence is asymptotically false
    assert_eq!(stdout_json(&out)["bit"], 0);
}

#[test]
fn corpus_passes_on_the_bundled_cases() {
    let out = rw(&["corpus", corpus_dir().to_str().unwrap()]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = stdout_json(&out);
    assert_eq!(r["failed"], 0);
    assert_eq!(r["total"], 10);
    let names: Vec<&str> = r["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted, "case order follows case names");
    for case in r["cases"].as_array().unwrap() {
        assert_eq!(case["status"], "pass", "{case}");
    }
}

#[test]
fn corpus_flags_wrong_expectations_and_malformed_cases() {
    let dir = tmp_dir("bad-corpus");
    fs::copy(corpus_dir().join("tie.kb"), dir.join("tie.kb")).unwrap();
    // wrong expectation: the tie KB does not yield a point verdict
    fs::write(
        dir.join("wrong.case.json"),
        r#"{
  "name": "wrong",
  "kb": "tie.kb",
  "query": "P(c)",
  "expected": { "kind": "POINT", "value": "1/2", "tolerance": "1/100" }
}
"#,
    )
    .unwrap();
    fs::write(dir.join("broken.case.json"), "{ not json").unwrap();

    let out = rw(&["corpus", dir.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 4);
    let r = stdout_json(&out);
    assert_eq!(r["total"], 2);
    assert_eq!(r["failed"], 2);
    let wrong = &r["cases"][1];
    assert_eq!(wrong["name"], "wrong");
    assert_eq!(wrong["status"], "fail");
    assert!(wrong["detail"][0]
        .as_str()
        .unwrap()
        .contains("expected POINT"));
    assert!(r["cases"][0]["detail"][0]
        .as_str()
        .unwrap()
        .contains("malformed"));
}

#[test]
fn empty_corpus_dir_passes_with_a_warning() {
    let dir = tmp_dir("empty-corpus");
    let out = rw(&["corpus", dir.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let r = stdout_json(&out);
    assert_eq!(r["total"], 0);
    assert_eq!(r["failed"], 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}
