//! End-to-end tests of the binary: verbs, JSON shapes, exit codes, and the
//! construct -> classify round-trip.

use serde_json::Value;
use std::process::{Command, Output};

fn sumfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumfree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn mu_reports_density_and_type() {
    let v = json_of(&sumfree(&["mu", "13"]));
    assert_eq!(v["mu"], "4/13");
    assert_eq!(v["type"], "III");
    assert_eq!(v["k"], 2);

    let v = json_of(&sumfree(&["mu", "7x7"]));
    assert_eq!(v["mu"], "2/7");
    assert_eq!(v["n"], 49);

    let v = json_of(&sumfree(&["type", "10"]));
    assert_eq!(v["type"], "I");
    assert_eq!(v["p"], 2);
}

#[test]
fn malformed_group_specs_are_usage_errors() {
    for bad in ["7x0", "0", "x", "7y7"] {
        let out = sumfree(&["mu", bad]);
        assert_eq!(out.status.code(), Some(1), "spec {bad:?}");
    }
    let out = sumfree(&["frobnicate", "7"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_arguments_exit_2() {
    // gcd(n, k - l) != 1
    let out = sumfree(&["klfree", "4", "--k", "3", "--l", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // classify requires a maximum set
    let out = sumfree(&["classify", "13", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn incomplete_search_exits_3() {
    let out = sumfree(&["search", "7x7", "--mode", "all", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn classify_cyclic_family() {
    let v = json_of(&sumfree(&["classify", "13", "4,6,7,9"]));
    assert_eq!(v["verdict"], "cyclic-family-2");
}

#[test]
fn check_reports_set_properties() {
    let v = json_of(&sumfree(&["check", "7", "3,4"]));
    assert_eq!(v["sum_free"], true);
    assert_eq!(v["maximal"], true);
    assert_eq!(v["density"], "2/7");
    assert_eq!(v["stabilizer"]["size"], 1);
    assert!(v["hom_preimage"].is_object());
}

#[test]
fn construct_classify_round_trip() {
    for (family, expected) in [
        ("exam1", "maxch2"),
        ("exam2", "maxch3"),
        ("maxch1", "interval-preimage"),
    ] {
        // --J is the primary flag spelling; --j is accepted as an alias
        let built = json_of(&sumfree(&[
            "construct",
            "7x7",
            "--family",
            family,
            "--J",
            "0",
            "--b",
            "(1)",
        ]));
        assert_eq!(built["sum_free"], true, "{family}");
        let literal = built["literal"].as_str().unwrap();
        let verdict = json_of(&sumfree(&["classify", "7x7", literal]));
        assert_eq!(verdict["verdict"], expected, "{family}");
    }
}

#[test]
fn construct_maximal_example() {
    let v = json_of(&sumfree(&["construct", "7x7", "--family", "maximal49"]));
    assert_eq!(v["size"], 13);
    assert_eq!(v["sum_free"], true);
}

#[test]
fn construct_interval() {
    let v = json_of(&sumfree(&["construct", "7", "--family", "interval"]));
    assert_eq!(v["set"], serde_json::json!([[3], [4]]));
}

#[test]
fn search_orbits_on_z7() {
    let v = json_of(&sumfree(&["search", "7", "--mode", "orbits"]));
    assert_eq!(v["optimum"], 2);
    assert_eq!(v["orbit_count"], 2);
    assert_eq!(v["complete"], true);
}

#[test]
fn klfree_matches_formula() {
    let v = json_of(&sumfree(&["klfree", "11", "--k", "4", "--l", "1"]));
    assert_eq!(v["optimum"], 2);
    assert_eq!(v["lambda"], "2/11");
}

#[test]
fn verify_paper_passes_on_desk_groups() {
    for group in ["7", "10", "7x7"] {
        let out = sumfree(&["verify-paper", group, "--trials", "50"]);
        assert!(
            out.status.success(),
            "verify-paper {group}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["ok"], true);
    }
}

#[test]
fn text_output_is_line_oriented() {
    let out = sumfree(&["mu", "13", "--output", "text"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("mu(13) = 4/13"));
}
