use std::process::{Command, Output};

use serde_json::Value;

fn rampi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rampi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const REPORT_KEYS: [&str; 12] = [
    "spec",
    "method",
    "terms_used",
    "working_precision_bits",
    "lhs",
    "rhs",
    "abs_error",
    "rel_error",
    "digits_agreed",
    "tail_bound",
    "pass",
    "elapsed_ms",
];

fn assert_report_shape(v: &Value) {
    let obj = v.as_object().expect("report is an object");
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    let mut want = REPORT_KEYS.to_vec();
    want.sort_unstable();
    assert_eq!(keys, want);
    for k in ["lhs", "rhs", "abs_error", "rel_error"] {
        assert!(v[k].is_string(), "{k} should be a decimal string");
    }
    assert!(v["tail_bound"].is_null() || v["tail_bound"].is_string());
    assert!(v["pass"].is_boolean());
}

#[test]
fn verify_glaisher_series() {
    let out = rampi(&[
        "verify", "--alpha", "1/2", "--a", "0", "--b", "0", "--c", "1", "--digits", "20",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_report_shape(&v);
    assert_eq!(v["spec"]["alpha"], "1/2");
    assert_eq!(v["pass"], true);
    assert!(v["rhs"].as_str().unwrap().starts_with("1.2732395447351626861"));
}

#[test]
fn divergent_spec_is_a_usage_error() {
    let out = rampi(&["verify", "--alpha", "1/2", "--a", "1", "--b", "1", "--c", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c - a - b"));
}

#[test]
fn non_canonical_alpha_is_rejected() {
    let out = rampi(&["verify", "--alpha", "3/2", "--a", "0", "--b", "0", "--c", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rampi(&[
        "verify", "--alpha", "2/4", "--a", "0", "--b", "0", "--c", "1", "--digits", "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["spec"]["alpha"], "1/2");
}

#[test]
fn negative_shifts_are_accepted() {
    let out = rampi(&[
        "verify", "--alpha", "1/3", "--a", "-1", "--b", "-1", "--c", "0", "--digits", "15",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn rigorous_mode_reports_a_bound() {
    let out = rampi(&[
        "verify", "--alpha", "1/4", "--a", "0", "--b", "1", "--c", "3", "--digits", "4", "--mode", "rigorous",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["method"], "direct-exact");
    assert!(v["tail_bound"].is_string());
}

#[test]
fn exhausted_budget_fails_verification() {
    let out = rampi(&[
        "verify",
        "--alpha",
        "1/2",
        "--a",
        "0",
        "--b",
        "0",
        "--c",
        "1",
        "--digits",
        "10",
        "--mode",
        "rigorous",
        "--max-terms",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_catalog_in_catalog_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.json");
    let out = rampi(&[
        "--threads",
        "4",
        "verify-catalog",
        "--digits",
        "20",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let reports = v.as_array().unwrap();
    // Ten explicit entries and three instances of each of eight families.
    assert_eq!(reports.len(), 10 + 8 * 3);
    for r in reports {
        assert_report_shape(r);
        assert_eq!(r["pass"], true);
    }
    assert_eq!(reports[0]["spec"]["c"], 1);
    assert_eq!(reports[1]["spec"]["c"], 2);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written.as_array().unwrap().len(), reports.len());
}

#[test]
fn sweep_skips_invalid_c() {
    let out = rampi(&[
        "sweep",
        "--alpha",
        "1/6",
        "--a",
        "0",
        "--b",
        "0",
        "--c-range",
        "0..4",
        "--digits",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipping c = 0"));
}

#[test]
fn generate_formats() {
    let out = rampi(&["generate", "--id", "ex-3.3"]);
    let latex = String::from_utf8(out.stdout).unwrap();
    assert!(latex.contains("\\frac{4}{\\pi}"));
    assert!(latex.contains("\\frac{(\\frac{1}{2})_n^2}{(n+1)n!^2}"));

    let out = rampi(&["generate", "--id", "ex-3.6", "--format", "latex"]);
    let latex = String::from_utf8(out.stdout).unwrap();
    assert!(latex.contains("=5+") && latex.contains("(n+1)!^2"));

    let out = rampi(&["generate", "--spec", "1/4,-1,-1,0", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["rhs"], "128√2/(9π)");
    let reparsed = rampi::parse_spec(v["latex"].as_str().unwrap()).unwrap();
    let alpha = rampi::RationalAlpha::new(1, 4).unwrap();
    assert_eq!(reparsed, rampi::SeriesSpec::new(alpha, -1, -1, 0).unwrap());

    let out = rampi(&["generate", "--id", "ex-a14-k0", "--format", "text"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("8√2/(3π) = 1 + 3/16"));
}

#[test]
fn catalog_list() {
    let out = rampi(&["catalog", "list", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 18);
    assert_eq!(v[0]["id"], "ex-3.3");
    let out = rampi(&["catalog", "list"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("ex-a110-k0"));
}

#[test]
fn pi_digits() {
    let out = rampi(&["pi", "--digits", "30"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "3.14159265358979323846264338328"
    );
    let out = rampi(&["pi", "--digits", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(rampi(&["verify", "--bogus"]).status.code(), Some(2));
}
