mod common;

use common::{check_golden, run_binary, GOLDEN_CASES};

#[test]
fn golden_reports_match() {
    let failures: Vec<String> = GOLDEN_CASES.iter().filter_map(|c| check_golden(c).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn spec_example_reports() {
    let (code, out, _) = run_binary(&["verify-heyting", "M2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["ideals"].as_array().unwrap().len(), 3);
    assert_eq!(v["result"]["all_laws_hold"], true);
    let cex = &v["result"]["excluded_middle"]["counterexamples"];
    assert_eq!(cex.as_array().unwrap().len(), 1);
    assert_eq!(cex[0]["ideal"], serde_json::json!(["e"]));

    let (code, out, _) = run_binary(&[
        "--spec", "tests/fixtures/qubit.mtopos", "sieve", "--context", "(Pz,Pplus)", "--state", "e1", "--op", "A",
        "--range", "{1}",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["sieve"]["context"], "(Pz,Pplus)");
    assert_eq!(v["result"]["sieve"]["is_full"], true);
}

#[test]
fn timing_is_opt_in() {
    let (_, plain, _) = run_binary(&["verify-heyting", "Z2"]);
    assert!(!plain.contains("elapsed_ms"));
    let (_, timed, _) = run_binary(&["verify-heyting", "Z2", "--timing"]);
    assert!(timed.contains("elapsed_ms"));
}
