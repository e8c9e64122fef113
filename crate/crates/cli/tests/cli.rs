use std::process::{Command, Output};

use serde_json::Value;

fn fqhyper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqhyper"))
        .args(args)
        .env_remove("FQHYPER_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn trace_all_methods_agree_over_f5() {
    let out = fqhyper(&[
        "trace", "--p", "5", "--e", "1", "--a", "1", "--b", "0", "--method", "all", "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["agreement"], true);
    let reports = v["reports"].as_array().unwrap();
    let by_method = |m: &str| reports.iter().find(|r| r["method"] == m).unwrap().clone();
    assert_eq!(by_method("naive")["trace"], 2);
    assert_eq!(by_method("thm_1_2")["trace"], 2);
    assert_eq!(by_method("thm_1_2")["shift_trace"], 2);
    let k = by_method("thm_1_1");
    assert_eq!(k["status"], "skipped");
    assert_eq!(k["reason"], "wrong_congruence");
}

#[test]
fn trace_text_output() {
    let out = fqhyper(&["trace", "--p", "13", "--a", "10", "--b", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("naive    a_q = -2"), "{text}");
    assert!(text.contains("thm_1_1  a_q = -2"), "{text}");
    assert!(text.contains("agreement: true"), "{text}");
}

#[test]
fn single_inapplicable_method_exits_2() {
    let out = fqhyper(&["trace", "--p", "11", "--e", "1", "--a", "1", "--b", "2", "--method", "thm1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("wrong_congruence"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["trace", "--p", "4", "--a", "1", "--b", "0"][..],
        &["trace", "--p", "5", "--a", "7", "--b", "0"],
        &["trace", "--p", "5", "--e", "2", "--a", "3", "--b", "0"],
        &["trace", "--p", "2", "--a", "1", "--b", "1"],
        &["verify", "--q-max", "50", "--sampling", "random"],
        &["verify", "--q-min", "60", "--q-max", "50"],
        &["verify", "--q-max", "50", "--theorems", "2.7"],
        &["bench", "--q", "12"],
    ] {
        let out = fqhyper(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn extension_field_digits() {
    let out = fqhyper(&[
        "trace", "--p", "5", "--e", "2", "--a", "1,1", "--b", "3,0", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["q"], 25);
    assert_eq!(v["a"], "1,1");
    assert_eq!(v["agreement"], true);
}

#[test]
fn mod4_verify_passes_and_is_byte_stable() {
    let args = [
        "verify", "--congruence", "mod4", "--q-max", "100", "--sampling", "exhaustive",
        "--format", "json",
    ];
    let first = fqhyper(&args);
    assert_eq!(first.status.code(), Some(0));
    let v = json(&first);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["summary"]["coverage_ok"], true);
    assert!(v["summary"]["passed"].as_u64().unwrap() > 0);
    assert!(v["summary"].get("elapsed_ms").map_or(true, Value::is_null));
    let second = fqhyper(&args);
    assert_eq!(first.stdout, second.stdout);
    let parallel_off = fqhyper(&[&["--sequential"][..], &args].concat());
    assert_eq!(first.stdout, parallel_off.stdout);
}

#[test]
fn skipped_records_carry_one_reason() {
    let out = fqhyper(&[
        "verify", "--q-min", "81", "--q-max", "81", "--congruence", "mod4", "--sampling",
        "random", "--samples", "20", "--seed", "3", "--records", "non-pass", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["status"], "skip");
    assert_eq!(records[0]["reason"], "characteristic_three");
}

#[test]
fn verify_csv_to_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fqhyper"))
        .args(["verify", "--q-max", "13", "--congruence", "mod6", "--format", "csv"])
        .env("FQHYPER_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("q,p,e,theorem,shape,coefficients"));
    assert!(lines.all(|l| l.ends_with(",pass,")), "{text}");
}

#[test]
fn explicit_output_file_wins() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub").join("ids.json");
    let out = Command::new(env!("CARGO_BIN_EXE_fqhyper"))
        .args(["identities", "--q-max", "13", "--format", "json", "--output"])
        .arg(&path)
        .env("FQHYPER_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["fields"], serde_json::json!([5, 7, 9, 11, 13]));
    assert!(v["failures"].as_array().unwrap().is_empty());
    assert!(!dir.path().join("identities.json").exists());
}

#[test]
fn bench_reports_crossover_table() {
    let out = fqhyper(&["bench", "--q", "257", "--reps", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["gauss"].as_array().unwrap();
    assert_eq!(rows.last().unwrap()["q"], 257);
    assert_eq!(v["trace"]["method"], "thm_3_2");
}
