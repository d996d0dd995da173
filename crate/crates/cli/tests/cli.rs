use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn conserv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conserv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "schemas", name].iter().collect();
    let text = std::fs::read_to_string(path).expect("schema file");
    let value: Value = serde_json::from_str(&text).expect("schema is JSON");
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

fn assert_valid(schema_name: &str, instance: &Value) {
    let s = schema(schema_name);
    let msgs: Vec<String> = match s.validate(instance) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema_name}: {msgs:?}");
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, bytes).unwrap();
    p
}

#[test]
fn show_s2_over_q_prints_the_table() {
    let o = conserv(&["show", "S2", "--field", "Q"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(2)
        .map(|l| l.split('|').skip(1).map(str::trim).collect())
        .collect();
    assert_eq!(
        rows,
        vec![
            vec!["-e1", "-3e2", "e3", "3e4"],
            vec!["3e2", "0", "2e1", "e3"],
            vec!["-2e3", "-e1", "-3e4", "0"],
            vec!["0", "0", "0", "0"],
        ]
    );
}

#[test]
fn show_w2x2_over_f2_is_the_integer_table_mod_2() {
    let q = json(&conserv(&["show", "W2x2", "--json"]));
    let f2 = json(&conserv(&["show", "W2x2", "--field", "F2", "--json"]));
    assert_eq!(f2["field"], serde_json::json!({"kind": "Fp", "p": 2}));
    let reduce = |s: &str| (s.parse::<i64>().expect("integer entry")).rem_euclid(2).to_string();
    let expected: Vec<Vec<Vec<String>>> = q["table"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|cell| cell.as_array().unwrap().iter().map(|c| reduce(c.as_str().unwrap())).collect())
                .collect()
        })
        .collect();
    assert_eq!(f2["table"], serde_json::to_value(expected).unwrap());
}

#[test]
fn show_from_file_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    for (name, field) in [("S2", "Q"), ("W2x2", "F2"), ("W2", "F3")] {
        let first = conserv(&["show", name, "--field", field, "--json"]);
        let path = write(dir.path(), &format!("{name}.json"), &first.stdout);
        let second = conserv(&["show", path.to_str().unwrap(), "--json"]);
        assert_eq!(second.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout, "{name} over {field}");
        assert_valid("algebra.schema.json", &json(&second));
    }
}

#[test]
fn file_field_must_agree_with_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s2.json", &conserv(&["show", "S2", "--json"]).stdout);
    let o = conserv(&["show", path.to_str().unwrap(), "--field", "F5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not F5"), "{}", stderr(&o));
}

#[test]
fn malformed_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.json",
        br#"{"name":"x","field":{"kind":"Q"},"dim":2,"table":[[["1","0"]]]}"#,
    );
    let o = conserv(&["show", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid algebra file"), "{}", stderr(&o));
}

#[test]
fn composite_and_unknown_fields_are_rejected() {
    for bad in ["F4", "F6", "F1"] {
        let o = conserv(&["show", "S2", "--field", bad]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
        assert!(stderr(&o).contains("only prime fields"), "{bad}: {}", stderr(&o));
    }
    let o = conserv(&["show", "S2", "--field", "R"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown field"));
}

#[test]
fn unknown_ref_and_missing_mode_are_usage_errors() {
    assert_eq!(conserv(&["show", "S3"]).status.code(), Some(2));
    assert_eq!(conserv(&["autos", "S2", "--field", "F3"]).status.code(), Some(2));
    assert_eq!(conserv(&["autos", "S2", "--complete"]).status.code(), Some(2));
    assert_eq!(conserv(&["kantor"]).status.code(), Some(2));
    assert_eq!(conserv(&["verify-paper", "--only", "12"]).status.code(), Some(2));
    assert_eq!(conserv(&["verify-paper", "--corrupt", "S2:1,2,9"]).status.code(), Some(2));
}

#[test]
fn analyze_w2_over_f3() {
    let o = conserv(&["analyze", "W2", "--field", "F3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_valid("analysis-report.schema.json", &r);
    assert_eq!(r["mult_algebra"]["dimension"], 20);
    assert_eq!(r["mult_algebra"]["radical_dim"], 12);
    assert_eq!(r["mult_algebra"]["radical_square_dims"], serde_json::json!([12, 4, 0]));
    assert_eq!(r["mult_algebra"]["quotient_identification"], "M2 ⊕ M2");
    assert_eq!(r["simple"], false);
    assert_eq!(r["lemma"]["verdict"]["verdict"], "not_simple");
}

#[test]
fn analyze_s2_over_f5_and_q() {
    for field in ["F5", "Q"] {
        let o = conserv(&["analyze", "S2", "--field", field, "--json"]);
        assert_eq!(o.status.code(), Some(0), "{field}");
        let r = json(&o);
        assert_valid("analysis-report.schema.json", &r);
        assert_eq!(r["mult_algebra"]["dimension"], 16);
        assert_eq!(r["simple"], true);
        assert_eq!(r["lemma"]["verdict"]["verdict"], "simple");
    }
}

#[test]
fn analyze_zero_algebra_fails() {
    let o = conserv(&["analyze", "zero:3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("zero-multiplication algebra"));
}

#[test]
fn autos_complete_counts() {
    for (name, field, count) in [("S2", "F3", "6 = 6"), ("W2x2", "F3", "36 = 36"), ("W2", "F5", "20 = 20")] {
        let o = conserv(&["autos", name, "--field", field, "--complete"]);
        assert_eq!(o.status.code(), Some(0), "{name}/{field}");
        let text = stdout(&o);
        assert!(text.contains(count) && text.trim_end().ends_with("pass"), "{text}");
    }
}

#[test]
fn autos_family_over_q_passes_on_samples() {
    let o = conserv(&["autos", "S2", "--field", "Q", "--family", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["passed"], true);
    assert_eq!(r["family"]["exhaustive"], false);
    assert_eq!(r["family"]["members_checked"], 50);
}

#[test]
fn autos_family_rejects_a_different_table() {
    let o = conserv(&["autos", "S2", "--field", "F5", "--family", "--name", "M_abc"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn autos_enumerate_lists_identity_first() {
    let o = conserv(&["autos", "S2", "--field", "F2", "--enumerate", "--json"]);
    let r = json(&o);
    assert_eq!(r["count"], 2);
    let id: Vec<Vec<String>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { "1" } else { "0" }.to_string()).collect())
        .collect();
    assert_eq!(r["automorphisms"][0], serde_json::to_value(id).unwrap());
}

#[test]
fn derivations_of_s2() {
    for field in ["Q", "F2", "F3", "F5"] {
        let r = json(&conserv(&["derivations", "S2", "--field", field, "--json"]));
        assert_eq!(r["dim"], 2, "{field}");
        assert_eq!(r["abelian"], false);
        assert_eq!(r["aff2"]["outcome"], "normalized");
    }
    let r = json(&conserv(&["derivations", "zero:2", "--json"]));
    assert_eq!(r["dim"], 4);
}

#[test]
fn kantor_rebuild_and_invariants_pass() {
    let o = conserv(&["kantor", "--rebuild-w2", "--check-invariants", "--samples", "40", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["rebuild"]["mismatches"], serde_json::json!([]));
    assert_eq!(r["invariants"]["sets"][1]["mismatches"], 0);
}

#[test]
fn graph_dot_export_for_s2() {
    let dir = tempfile::tempdir().unwrap();
    let simple = dir.path().join("s2.dot");
    let full = dir.path().join("s2_full.dot");
    assert_eq!(conserv(&["graph", "S2", "--dot", simple.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(
        conserv(&["graph", "S2", "--dot", full.to_str().unwrap(), "--full"]).status.code(),
        Some(0)
    );
    let edges = |p: &Path| std::fs::read_to_string(p).unwrap().matches("->").count();
    assert_eq!(edges(&simple), 5);
    assert_eq!(edges(&full), 8);
}

#[test]
fn verify_paper_subset_writes_valid_deterministic_json() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = conserv(&["verify-paper", "--only", "1,2,8,11", "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        assert_valid("verification-report.schema.json", &v);
        for c in v["checks"].as_array_mut().unwrap() {
            c["runtime_ms"] = Value::from(0);
        }
        v
    };
    let first = run("a.json");
    assert_eq!(first, run("b.json"));
    let statuses: Vec<&str> = first["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["status"].as_str().unwrap())
        .collect();
    assert_eq!(statuses.iter().filter(|s| **s == "pass").count(), 4);
    assert_eq!(statuses.iter().filter(|s| **s == "skipped").count(), 7);
}

#[test]
fn corrupted_catalog_entry_fails_and_is_named() {
    let o = conserv(&["verify-paper", "--only", "1", "--corrupt", "W2x2:1,2,3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("coefficient of e3 in e1e2"), "{}", stdout(&o));
}

#[test]
fn thread_cap_is_honored_and_validated() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_conserv"))
            .args(["autos", "S2", "--field", "F3", "--complete"])
            .env("CONSERV_THREADS", v)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(0));
    assert_eq!(run("zero").status.code(), Some(2));
    assert_eq!(run("0").status.code(), Some(2));
}

#[test]
fn full_run_fails_only_on_the_w2x2_char2_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("report.json");
    let o = conserv(&["verify-paper", "--json", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert_valid("verification-report.schema.json", &v);
    let failing: Vec<u64> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["criterion"].as_u64().unwrap())
        .collect();
    assert_eq!(failing, vec![5]);
    assert!(stdout(&o).contains("W(2)/F2 dim M: expected 40, got 52"), "{}", stdout(&o));
}
