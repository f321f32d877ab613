use std::process::Command;

use serde_json::Value;

fn wpzeta(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wpzeta"))
        .args(args)
        .output()
        .expect("runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let (code, out, err) = wpzeta(&a);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn table_four_by_number_and_name() {
    let by_number = json(&["tables", "--which", "4"]);
    let by_name = json(&["tables", "--which", "elliptic-k3-fibered"]);
    assert_eq!(by_number, by_name);
    let rows = by_number["rows"].as_array().unwrap();
    let printed: Vec<&Value> = rows.iter().filter(|r| r.get("extra").is_none()).collect();
    assert_eq!(printed.len(), 23);
    assert_eq!(printed[0]["chi"], -216);
    assert_eq!(printed[8]["chi"], -144);
}

#[test]
fn unknown_table_is_bad_input() {
    let (code, _, err) = wpzeta(&["tables", "--which", "9"]);
    assert_eq!(code, 2);
    assert!(err.contains("no table 9"));
}

#[test]
fn zeta_of_cubic_curve_is_verified() {
    let doc = json(&["zeta", "E1", "--p", "7"]);
    assert_eq!(doc["verified"], true);
    assert_eq!(
        doc["zeta"]["factors"][1],
        serde_json::json!(["1", "1", "7"])
    );
}

#[test]
fn zeta_from_inline_json() {
    let h = r#"{"weights":[1,1,2],"degree":4,"kind":"diagonal","exponents":[4,4,2]}"#;
    let doc = json(&["zeta", h, "--p", "5"]);
    assert_eq!(doc["verified"], true);
}

#[test]
fn count_bound_exit_code() {
    // the xyz term couples all variables, so the histogram count needs q^3 points
    let (code, _, err) = wpzeta(&[
        "count",
        "hasse",
        "--value",
        "mu=1",
        "--p",
        "101",
        "--count-bound",
        "1000",
    ]);
    assert_eq!(code, 4, "{err}");
}

#[test]
fn count_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_wpzeta"))
        .args(["count", "hasse", "--value", "mu=1", "--p", "101"])
        .env("WPZETA_COUNT_BOUND", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn output_is_independent_of_threads() {
    let args = ["--json", "deform", "hasse", "--p", "7", "--value", "mu=3"];
    let one = wpzeta(&[&["--threads", "1"][..], &args].concat());
    let two = wpzeta(&[&["--threads", "3"][..], &args].concat());
    assert_eq!(one.0, 0);
    assert_eq!(one.1, two.1);
}

#[test]
fn deform_hasse_pencil() {
    let doc = json(&["deform", "hasse", "--p", "7", "--value", "mu=5", "--katz"]);
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["support_matches_prediction"], true);
    assert_eq!(doc["katz"]["holds"], true);
    assert_eq!(doc["fibers"][0]["verified"], true);
    assert_eq!(doc["fibers"][0]["truncation"], 42);
}

#[test]
fn singular_fiber_is_rejected() {
    let (code, _, err) = wpzeta(&["deform", "hasse", "--p", "7", "--value", "mu=2"]);
    assert_eq!(code, 2);
    assert!(err.contains("not quasi-smooth"));
}

#[test]
fn resolve_lattice_and_chain() {
    let doc = json(&["resolve", "--lattice", "33,21,11"]);
    assert_eq!(doc["interior"], 10);
    let doc = json(&["resolve", "--hj", "5,2"]);
    assert_eq!(doc["length"], 2);
}

#[test]
fn analyze_threefold_row() {
    let doc = json(&["analyze", "--table", "4", "--row", "1"]);
    assert_eq!(doc["betti"]["chi"], -216);
    assert!(!doc["loci"].as_array().unwrap().is_empty());
}

#[test]
fn deform_needs_a_deformation_monomial() {
    let (code, _, _) = wpzeta(&["deform", "--weights", "1,1,1", "--degree", "3", "--p", "7"]);
    assert_eq!(code, 2);
}
