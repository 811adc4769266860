use std::fs;
use std::path::Path;

use quartic_cli::document::{find_null, ResultDocument, Status, SCHEMA};
use quartic_cli::run;
use quartic_oracles::hermite::{quartic_levels, HermiteBasis};
use serde_json::{json, Value};

fn quartic(args: &[&str], out: &Path) -> quartic_cli::Outcome {
    let mut argv = vec!["quartic", "--out-dir", out.to_str().unwrap()];
    argv.extend_from_slice(args);
    run(argv)
}

fn document(out: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join(format!("{name}.json"))).unwrap()).unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    jsonschema::JSONSchema::compile(&schema).unwrap()
}

fn assert_valid(doc: &Value) {
    let compiled = schema();
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "schema violations: {msgs:?}");
}

#[test]
fn trees_act_transforms_a1_to_q10() {
    let dir = tempfile::tempdir().unwrap();
    let out = quartic(&["trees-act", "--word", "s0", "--state", "A[1]"], dir.path());
    assert_eq!(out.code, 0);
    let doc = document(dir.path(), "trees-act");
    assert_eq!(doc["payload"]["result"], "Q[1,0]");
    assert_eq!(doc["status"], "ok");
    assert_valid(&doc);
}

#[test]
fn scale_with_unit_beta_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(quartic(&["scale", "--beta", "1"], dir.path()).code, 0);
    let doc = document(dir.path(), "scale");
    assert_eq!(doc["payload"]["alpha"], json!({"re": 1.0, "im": 0.0}));
    assert_eq!(doc["payload"]["factor"], json!({"re": 1.0, "im": 0.0}));
    assert_valid(&doc);
}

#[test]
fn spectrum_matches_matrix_oracle() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(quartic(&["spectrum", "--alpha", "0", "--n-max", "3"], dir.path()).code, 0);
    let doc = document(dir.path(), "spectrum");
    let oracle = quartic_levels(0.0, 3, HermiteBasis::default());
    let levels = doc["payload"]["eigenvalues"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    for (ev, expected) in levels.iter().zip(&oracle) {
        let re = ev["value"]["re"].as_f64().unwrap();
        let im = ev["value"]["im"].as_f64().unwrap();
        assert!((re - expected).abs() <= 1e-8 && im == 0.0, "{ev} vs {expected}");
    }
    assert_valid(&doc);
}

#[test]
fn parse_errors_exit_with_2_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["spectrum", "--alpha", "1+2j", "--n-max", "3"][..],
        &["spectrum", "--n-max", "3"],
        &["trees-act", "--word", "s0 s7", "--state", "A[1]"],
        &["trees-act", "--word", "s0", "--state", "A[-1]"],
        &["trees-orbit", "--start", "Q[1,0]"],
        &["branch-scan", "--box", "0,1,2"],
        &["monodromy", "--loop", r#"{"kind":"polyline","points":[{"re":1,"im":0},{"re":2,"im":0}]}"#, "--n-max", "2"],
        &["frobnicate"],
    ] {
        let out = quartic(args, dir.path());
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.document.is_none());
    }
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn computation_failure_exits_with_1_and_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let out = quartic(&["scale", "--beta", "-1"], dir.path());
    assert_eq!(out.code, 1);
    let doc = document(dir.path(), "scale");
    assert_eq!(doc["status"], "error");
    assert!(doc["payload"]["error"].as_str().unwrap().contains("branch cut"));
    assert_valid(&doc);
}

#[test]
fn identical_configurations_give_identical_documents() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |mut doc: Value| {
        doc["provenance"]["timestamp"] = Value::Null;
        serde_json::to_string(&doc).unwrap()
    };
    let args = ["spectrum", "--alpha", "-1.5+2i", "--n-max", "4", "--seed", "7"];
    assert_eq!(quartic(&args, dir.path()).code, 0);
    let first = strip(document(dir.path(), "spectrum"));
    assert_eq!(quartic(&args, dir.path()).code, 0);
    assert_eq!(first, strip(document(dir.path(), "spectrum")));
}

#[test]
fn continuation_writes_trace_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = r#"{"kind":"polyline","points":[{"re":1,"im":0},{"re":0,"im":1.5}]}"#;
    let out = quartic(&["continue", "--path", path, "--start", "1.39"], dir.path());
    assert_eq!(out.code, 0);
    let doc = document(dir.path(), "continue");
    assert_eq!(doc["payload"]["parity"], "even");
    assert_valid(&doc);

    let mut reader = csv::Reader::from_path(dir.path().join("continue.csv")).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["t", "re_alpha", "im_alpha", "re_lambda", "im_lambda", "residual"]);
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), doc["payload"]["trace"]["samples"].as_array().unwrap().len());
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows.last().unwrap()[0], 1.0);
    assert!((rows[0][3] - 1.3923516415).abs() < 1e-9);
}

#[test]
fn monodromy_of_small_loop_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let lp = r#"{"kind":"circle","center":{"re":1,"im":0},"radius":0.1,"turns":1,"start_angle":0}"#;
    assert_eq!(quartic(&["monodromy", "--loop", lp, "--n-max", "3"], dir.path()).code, 0);
    let doc = document(dir.path(), "monodromy");
    let perms = doc["payload"]["permutations"].as_array().unwrap();
    assert_eq!(perms.len(), 2);
    for p in perms {
        assert_eq!(p["mapping"], p["labels"]);
    }
    assert_valid(&doc);
}

#[test]
fn trees_orbit_document() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(quartic(&["trees-orbit", "--start", "D[0,1]", "--bound", "4"], dir.path()).code, 0);
    let doc = document(dir.path(), "trees-orbit");
    assert_eq!(doc["payload"]["origin_class"], "zero_at_origin");
    let states = doc["payload"]["states"].as_array().unwrap();
    assert_eq!(states.len() as u64, doc["payload"]["size"].as_u64().unwrap());
    assert!(states.contains(&json!("D[0,1]")));
    assert_valid(&doc);
}

#[test]
fn free_word_is_rewritten_alongside() {
    let dir = tempfile::tempdir().unwrap();
    let out = quartic(&["trees-act", "--word", "s0 s0i", "--state", "D[1,2]", "--free-word", "g_i g_-1^-1"], dir.path());
    assert_eq!(out.code, 0);
    let doc = document(dir.path(), "trees-act");
    assert_eq!(doc["payload"]["result"], "D[1,2]");
    assert_eq!(doc["payload"]["free_word"]["image"], "g_i g_-1^-1");
}

#[test]
fn out_dir_defaults_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var("QUARTIC_OUT_DIR", dir.path());
    let out = run(["quartic", "scale", "--alpha", "4"]);
    std::env::remove_var("QUARTIC_OUT_DIR");
    assert_eq!(out.code, 0);
    assert_eq!(out.written.unwrap(), dir.path().join("scale.json"));
    let doc = document(dir.path(), "scale");
    let beta = &doc["payload"]["beta"];
    assert!((beta["re"].as_f64().unwrap() - 0.125).abs() < 1e-15);
}

#[test]
fn nulls_are_rejected_by_schema_and_constructor() {
    let dir = tempfile::tempdir().unwrap();
    quartic(&["scale", "--beta", "2"], dir.path());
    let mut doc = document(dir.path(), "scale");
    assert_valid(&doc);
    doc["payload"]["alpha"]["re"] = Value::Null;
    assert!(!schema().is_valid(&doc));
    assert_eq!(find_null(&doc["payload"]).as_deref(), Some(".alpha.re"));
    let parsed: ResultDocument = serde_json::from_value(document(dir.path(), "scale")).unwrap();
    assert_eq!(parsed.status, Status::Ok);
}

#[test]
fn fast_criteria_pass() {
    use quartic_cli::verify::{run_criterion, Tier};
    for id in [1, 2, 3, 4, 7, 9] {
        let r = run_criterion(id, Tier::Quick, 0);
        assert!(r.passed, "{}", r.line());
    }
}
