use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotforge"))
        .args(args)
        .current_dir(root())
        .env_remove("KNOTFORGE_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

/// Replace every `{"$ref": "name"}` by the named schema.
fn inline_refs(v: &mut Value) {
    match v {
        Value::Object(m) => {
            if let Some(Value::String(r)) = m.get("$ref") {
                let mut sub = load_schema(r);
                if let Value::Object(s) = &mut sub {
                    s.remove("$schema");
                }
                *v = sub;
                return;
            }
            m.values_mut().for_each(inline_refs);
        }
        Value::Array(a) => a.iter_mut().for_each(inline_refs),
        _ => {}
    }
}

fn load_schema(name: &str) -> Value {
    let text = std::fs::read_to_string(root().join("docs/schemas").join(name)).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    inline_refs(&mut v);
    v
}

fn assert_valid(schema: &str, instance: &Value) {
    let s = load_schema(schema);
    let validator = jsonschema::validator_for(&s).unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

fn check_report(args: &[&str], schema: &str, code: i32) -> Value {
    let (v, c) = json(args);
    assert_eq!(c, code, "{args:?}");
    assert_valid("run_report.schema.json", &v);
    assert_valid(schema, &v["result"]);
    v
}

#[test]
fn reports_match_schemas() {
    let v = check_report(
        &["jones", "--skein-check", "corpus/trefoil.braid"],
        "jones.schema.json",
        0,
    );
    assert_eq!(v["result"]["text"], "-t^-4 + t^-3 + t^-1");
    assert_eq!(v["result"]["skein"]["all_zero"], true);
    let v = check_report(
        &["wnorm", "--level", "2", "--trace", "corpus/fig1.traversal"],
        "wnorm.schema.json",
        0,
    );
    assert_eq!(v["result"]["normalized"], true);
    check_report(&["wnorm", "corpus/fig2.traversal"], "wnorm.schema.json", 0);
    let v = check_report(
        &["kz", "conformal", "-N", "2", "-k", "1"],
        "kz_conformal.schema.json",
        0,
    );
    assert_eq!(
        (v["result"]["delta"].as_str(), v["result"]["c"].as_str()),
        (Some("1/4"), Some("1"))
    );
    check_report(&["kz", "pq", "-N", "2", "-k", "2"], "kz_pq.schema.json", 0);
    check_report(
        &["kz", "monodromy", "-N", "2", "-k", "1", "--center", "1"],
        "kz_monodromy.schema.json",
        0,
    );
    check_report(&["kz", "rmatrix", "-k", "3"], "kz_rmatrix.schema.json", 0);
    check_report(&["kz", "two-sided", "-k", "1"], "kz_two_sided.schema.json", 0);
    check_report(&["holonomy", "line", "--zero-field"], "holonomy_line.schema.json", 0);
    check_report(
        &["holonomy", "chiral-check", "--seed", "1", "--steps", "100"],
        "holonomy_chiral_check.schema.json",
        0,
    );
    check_report(&["holonomy", "gen", "--seed", "5"], "holonomy_gen.schema.json", 0);
}

#[test]
fn sample_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("knotforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let sample = dir.join("sample.json");
    let gauged = dir.join("gauged.json");
    let s = sample.to_str().unwrap();
    let g = gauged.to_str().unwrap();
    check_report(
        &["holonomy", "gen", "--seed", "9", "--steps", "60", "--closed", "-o", s],
        "holonomy_gen.schema.json",
        0,
    );
    let text: Value = serde_json::from_str(&std::fs::read_to_string(&sample).unwrap()).unwrap();
    assert_valid("holonomy_sample.schema.json", &text);
    let a = check_report(&["holonomy", "line", s], "holonomy_line.schema.json", 0);
    let b = check_report(&["holonomy", "line", s], "holonomy_line.schema.json", 0);
    assert_eq!(a, b);
    assert_eq!(a["result"]["closed"], true);
    check_report(
        &["holonomy", "gauge", s, "--seed", "2", "-o", g],
        "holonomy_gauge.schema.json",
        0,
    );
    let text: Value = serde_json::from_str(&std::fs::read_to_string(&gauged).unwrap()).unwrap();
    assert_valid("holonomy_sample.schema.json", &text);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["jones", "no/such/file"]).status.code(), Some(2));
    assert_eq!(run(&["kz", "conformal", "-N", "1", "-k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["holonomy", "line"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_knotforge"))
        .args(["wnorm", "corpus/fig4a.traversal"])
        .current_dir(root())
        .env("KNOTFORGE_BUDGET", "2000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("residual: Tr["));
    let out = Command::new(env!("CARGO_BIN_EXE_knotforge"))
        .args(["wnorm", "corpus/fig1.traversal"])
        .current_dir(root())
        .env("KNOTFORGE_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_output() {
    let out = run(&["kz", "conformal", "-N", "2", "-k", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# kz conformal\n"), "{text}");
    assert!(text.contains("delta: 3/16"));
    assert!(text.contains("c: 3/2"));
}
