use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn galderiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galderiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON on stdout")
}

fn assert_round_trips(o: &Output) {
    let text = stdout(o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn validate_catalog_entry() {
    let o = galderiv(&["validate", "--algebra", "pgca", "--window", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("pass"));
}

#[test]
fn validate_broken_file_names_the_triple() {
    let o = galderiv(&[
        "validate",
        "--algebra",
        &fixture("broken.json"),
        "--window",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("Jacobi identity violated for (L_"), "{out}");
    assert!(out.contains("H_") && out.contains("I_"), "{out}");
}

#[test]
fn validate_file_copy_of_pgca_passes() {
    let o = galderiv(&[
        "validate",
        "--algebra",
        &fixture("pgca.json"),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["basis_size"], 36);
    assert_round_trips(&o);
}

#[test]
fn unknown_algebra_is_a_usage_error() {
    for cmd in ["validate", "solve", "tp-classify"] {
        let o = galderiv(&[cmd, "--algebra", "nosuch"]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(stderr(&o).contains("heisenberg-virasoro"), "{}", stderr(&o));
    }
}

#[test]
fn usage_errors() {
    let cases: [&[&str]; 6] = [
        &["validate", "--window", "1"],
        &["solve", "--window", "5"],
        &["solve", "--delta", "1/0"],
        &["solve", "--interior", "20", "--window", "16"],
        &["lemmas", "--window", "4"],
        &["solve", "--format", "yaml"],
    ];
    for args in cases {
        assert_eq!(galderiv(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn solve_states_required_window() {
    let o = galderiv(&["solve", "--gamma-max", "3", "--window", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(">= 5"), "{}", stderr(&o));
}

#[test]
fn lemmas_states_required_window() {
    let o = galderiv(&["lemmas", "--window", "4"]);
    assert!(stderr(&o).contains(">= 8"), "{}", stderr(&o));
}

#[test]
fn solve_json_shape_and_round_trip() {
    let o = galderiv(&[
        "solve",
        "--gamma-max",
        "1",
        "--window",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_round_trips(&o);
    let v = json(&o);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["algebra", "delta", "interior", "reports", "verdict", "window"]
    );
    assert_eq!(v["delta"], "1/2");
    assert_eq!(v["interior"], 4);
    assert_eq!(v["verdict"], "scalar-only");
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 12);
    assert_eq!(reports[0]["degree"], serde_json::json!([0, 0, -1]));
    assert_eq!(reports[1]["classification"], "scalar");
    assert_eq!(reports[1]["basis"][0][0]["values"][0], "1");
    let keys: Vec<&str> = reports[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(
        keys,
        [
            "basis",
            "classification",
            "degree",
            "full_dim",
            "interior_dim"
        ]
    );
}

#[test]
fn solve_at_delta_one_is_not_scalar() {
    let o = galderiv(&[
        "solve",
        "--delta",
        "1",
        "--gamma-max",
        "0",
        "--window",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("(0,0,0)")).unwrap();
    assert!(row.ends_with("nontrivial"), "{row}");
    assert!(out.contains("verdict: not-scalar-only"));
}

#[test]
fn solve_abelian_zero_shift_degrees_are_nontrivial() {
    let o = galderiv(&[
        "solve",
        "--algebra",
        "abelian",
        "--gamma-max",
        "1",
        "--window",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    for r in json(&o)["reports"].as_array().unwrap() {
        let zero_shift = r["degree"][0] == 0 && r["degree"][1] == 0;
        let expected = if zero_shift { "nontrivial" } else { "zero" };
        assert_eq!(r["classification"], expected, "{}", r["degree"]);
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lemmas.json");
    let o = galderiv(&[
        "lemmas",
        "--window",
        "8",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 35);
    assert!(v["results"][0]["lemma"].as_str().unwrap().contains("[L,L]"));
}

#[test]
fn tp_classify_outputs() {
    let o = galderiv(&["tp-classify", "--algebra", "abelian", "--window", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("nontrivial possible"));

    let o = galderiv(&[
        "tp-classify",
        "--algebra",
        "heisenberg-virasoro",
        "--window",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_round_trips(&o);
    let v = json(&o);
    assert_eq!(v["classification"], "trivial");
    assert_eq!(v["solution_dim"], 0);
}

#[test]
fn broken_file_is_refused_by_solve() {
    let o = galderiv(&[
        "solve",
        "--algebra",
        &fixture("broken.json"),
        "--gamma-max",
        "0",
        "--window",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("[L, H]"), "{}", stderr(&o));
}

// Regression goldens for the comparison algebras.

#[test]
fn witt_golden() {
    let o = galderiv(&[
        "solve",
        "--algebra",
        "witt",
        "--gamma-max",
        "2",
        "--window",
        "8",
        "--format",
        "json",
    ]);
    let v = json(&o);
    assert_eq!(v["verdict"], "not-scalar-only");
    for r in v["reports"].as_array().unwrap() {
        let zero_shift = r["degree"][0] == 0 && r["degree"][1] == 0;
        assert_eq!(r["full_dim"], u8::from(zero_shift), "{}", r["degree"]);
        let expected = if zero_shift { "scalar" } else { "zero" };
        assert_eq!(r["classification"], expected, "{}", r["degree"]);
    }
    // products L_m . L_n = a(m + n) L_{m+n+k}: one dimension per shift k,
    // shifts |k| <= 2 * (8 - 4) fit the window
    let o = galderiv(&[
        "tp-classify",
        "--algebra",
        "witt",
        "--window",
        "10",
        "--format",
        "json",
    ]);
    let v = json(&o);
    assert_eq!(v["classification"], "nontrivial possible");
    assert_eq!(v["interior"], 5);
    assert_eq!(v["gamma_max"], 10);
    assert_eq!(v["solution_dim"], 11);
}

#[test]
fn heisenberg_virasoro_golden() {
    let o = galderiv(&[
        "solve",
        "--algebra",
        "heisenberg-virasoro",
        "--gamma-max",
        "3",
        "--window",
        "12",
        "--format",
        "json",
    ]);
    let v = json(&o);
    assert_eq!(v["verdict"], "scalar-only");
    let nonzero: Vec<&Value> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["classification"] != "zero")
        .collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0]["degree"], serde_json::json!([0, 0, 0]));
    assert_eq!(nonzero[0]["interior_dim"], 1);
}

#[test]
fn virasoro_golden() {
    let o = galderiv(&[
        "solve",
        "--algebra",
        "virasoro",
        "--gamma-max",
        "2",
        "--window",
        "10",
    ]);
    assert!(
        stdout(&o).contains("verdict: scalar-only"),
        "{}",
        stdout(&o)
    );
}
