mod common;

use std::fs;

use common::{golden_path, run, CASES};
use serde_json::Value;

/// Set `UPDATE_GOLDEN=1` to rewrite the expected outputs.
#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for case in CASES {
        let (code, out) = run(case.args, case.stdin);
        assert_eq!(code, case.exit, "{}: exit code, output {out}", case.name);
        let path = golden_path(case.name);
        if update {
            fs::write(&path, &out).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file for {}", case.name));
        if out != expected {
            mismatches.push(case.name);
        }
    }
    assert!(mismatches.is_empty(), "golden mismatches: {mismatches:?}");
}

#[test]
fn byte_identical_reruns() {
    for case in CASES {
        assert_eq!(run(case.args, case.stdin), run(case.args, case.stdin), "{}", case.name);
    }
}

#[test]
fn errors_are_json_objects() {
    for case in CASES.iter().filter(|c| c.exit == 2) {
        let (_, out) = run(case.args, case.stdin);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v["error"].is_string(), "{}", case.name);
    }
}

#[test]
fn mirror_dual_dual_round_trip() {
    for torus in ["level2.json", "product.json", "split_1_2.json"] {
        let (code, mirrored) = run(&["mirror", torus], None);
        assert_eq!(code, 0);
        let (_, once) = run(&["dual", "-"], Some(&mirrored));
        let (_, twice) = run(&["dual", "-"], Some(&once));
        let m: Value = serde_json::from_str(&mirrored).unwrap();
        let once: Value = serde_json::from_str(&once).unwrap();
        let twice: Value = serde_json::from_str(&twice).unwrap();
        assert_eq!(m["valuation_matrix"], twice["valuation_matrix"]);
        assert_ne!(m["valuation_matrix"], once["valuation_matrix"], "{torus} is not symmetric");
        assert!(twice["polarization"].is_null());
    }
}

#[test]
fn classify_exit_codes_follow_verdicts() {
    for case in CASES.iter().filter(|c| c.args[0] == "classify" && c.exit != 2) {
        let (code, out) = run(case.args, case.stdin);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["symplectomorphic"], v["derived_equivalent"]);
        assert_eq!(code == 0, v["symplectomorphic"] == Value::Bool(true), "{}", case.name);
    }
}

#[test]
fn oracle_agrees() {
    let (_, out) = run(&["classify", "level2.json", "split_half_1.json", "--oracle"], None);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["oracle"]["agrees"], Value::Bool(true));
}

#[test]
fn strict_outputs_verify() {
    for case in CASES.iter().filter(|c| c.args[0] == "strictify") {
        let (_, out) = run(case.args, case.stdin);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["compatible"], Value::Bool(true), "{}", case.name);
        assert_eq!(v["right_action"], Value::Bool(true), "{}", case.name);
    }
}

#[test]
fn seeds_change_output() {
    let (_, a) = run(&["strictify", "--group", "Z3", "--seed", "7"], None);
    let (_, b) = run(&["strictify", "--group", "Z3", "--seed", "8"], None);
    assert_ne!(a, b);
}

#[test]
fn witness_flag_controls_output() {
    let (_, plain) = run(&["classify", "split_1_2.json", "split_2_1.json"], None);
    let v: Value = serde_json::from_str(&plain).unwrap();
    assert!(v["witness"].is_null());
}
