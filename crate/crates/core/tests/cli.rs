use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_schublci"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    (
        code,
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}")),
    )
}

fn ok_payload(args: &[&str]) -> Value {
    let (code, v) = json(args);
    assert_eq!(code, 0, "{args:?}: {v}");
    assert_eq!(v["status"], "ok");
    assert!(v["elapsed_ms"].is_u64());
    v["payload"].clone()
}

fn error_code(args: &[&str], exit: i32) -> String {
    let (code, v) = json(args);
    assert_eq!(code, exit, "{args:?}: {v}");
    assert_eq!(v["status"], "error");
    assert!(v["message"].as_str().is_some_and(|m| !m.is_empty()));
    v["code"].as_str().unwrap().to_string()
}

#[test]
fn classify_examples() {
    let p = ok_payload(&["classify", "53241"]);
    assert_eq!(p["lci"], false);
    assert_eq!(p["nonlci_witness"]["source"], "FamilyA(2,1)");

    let p = ok_payload(&["classify", "819372564"]);
    assert_eq!(
        (p["lci"].as_bool(), p["dbi"].as_bool()),
        (Some(true), Some(false))
    );
    assert!(p.get("nonlci_witness").is_none_or(Value::is_null));

    let p = ok_payload(&["classify", "1,2,3"]);
    for key in ["smooth", "factorial", "dbi", "lci", "matrix_schubert_lci"] {
        assert_eq!(p[key], true, "{key}");
    }
}

#[test]
fn report_examples() {
    let p = ok_payload(&["report", "819732654", "diagram"]);
    let essential: Vec<(u64, u64)> = p["essential"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["p"].as_u64().unwrap(), e["q"].as_u64().unwrap()))
        .collect();
    assert_eq!(essential, [(2, 2), (4, 6), (9, 2)]);
    assert_eq!(p["inclusion_level"], "DBI");

    let p = ok_payload(&["report", "819372564", "ideal", "--minimal"]);
    assert_eq!(p["count"], 16);

    let p = ok_payload(&["report", "2,4,1,5,3", "localclass", "--oracle"]);
    assert_eq!(p["verdict"], "equal");
    let p = ok_payload(&[
        "report",
        "2,4,1,5,3",
        "localclass",
        "--oracle",
        "--theory",
        "k",
    ]);
    assert_eq!(p["verdict"], "equal");

    let p = ok_payload(&["report", "819372564", "cohomology"]);
    let kinds: Vec<&str> = p["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["origin"]["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds.iter().filter(|k| **k == "double_prime").count(), 2);
}

#[test]
fn kazhdan_lusztig_ideal_with_explicit_v() {
    let p = ok_payload(&["report", "526314", "ideal", "--v", "215436"]);
    assert_eq!(p["ideal"]["v"], "2,1,5,4,3,6");
    assert!(p["count"].as_u64().unwrap() >= 5);
}

#[test]
fn errors_and_exit_codes() {
    assert_eq!(error_code(&["classify", "1,2,2"], 2), "E_PARSE");
    assert_eq!(
        error_code(&["report", "4,2,5,1,3", "localclass", "--oracle"], 2),
        "E_NOT_LCI"
    );
    assert_eq!(
        error_code(&["report", "42513", "ideal", "--minimal"], 2),
        "E_NOT_LCI"
    );
    assert_eq!(error_code(&["verify", "nope"], 2), "E_PARSE");
    assert_eq!(error_code(&["bogus"], 2), "E_USAGE");
    assert_eq!(
        error_code(&["verify", "ideal-pointsets", "--max-n", "6"], 3),
        "E_BUDGET"
    );
    assert_eq!(error_code(&["count", "--max-n", "20"], 3), "E_BUDGET");
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn match_patterns() {
    let p = ok_payload(&["match", "231", "41523", "--all"]);
    assert_eq!(p["contains"], true);
    assert_eq!(p["occurrences"].as_array().unwrap().len(), 2);
    let p = ok_payload(&["match", "321", "12345"]);
    assert_eq!(p["contains"], false);
}

#[test]
fn verify_examples() {
    let p = ok_payload(&["verify", "hierarchy", "--max-n", "6"]);
    assert_eq!(p["total"], 873);
    assert_eq!(p["failures"].as_array().unwrap().len(), 0);

    let p = ok_payload(&["verify", "necessity", "--max-n", "7"]);
    assert_eq!(p["failures"].as_array().unwrap().len(), 0);

    let p = ok_payload(&["verify", "counting", "--max-n", "5"]);
    assert_eq!(p["details"]["slabs"], serde_json::json!([1, 2, 3, 5, 8]));
}

#[test]
fn parallel_payloads_match_serial() {
    for suite in ["hierarchy", "main-equivalence", "thm34", "necessity"] {
        let a = ok_payload(&["--jobs", "1", "verify", suite, "--max-n", "6"]);
        let b = ok_payload(&["--jobs", "4", "verify", suite, "--max-n", "6"]);
        assert_eq!(a, b, "{suite}");
    }
}

#[test]
fn ascii_output() {
    let (code, text) = run(&["--ascii", "classify", "53241"]);
    assert_eq!(code, 0);
    assert!(text.contains("FamilyA(2,1)"));
    let (_, text) = run(&["--ascii", "report", "819732654", "diagram"]);
    assert!(text.lines().count() >= 9);
}
