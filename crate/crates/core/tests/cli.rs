use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballquot")).args(args).output().expect("binary runs")
}

#[test]
fn passing_claims_exit_zero() {
    let out = run(&["run", "--claims", "cminred_table,small_d_list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS cminred_table"));
    assert!(text.contains("c_min_red(30) = 11/15"));
}

#[test]
fn perturbed_expectation_exits_one() {
    let out = run(&["run", "--claims", "cminred_table", "--expect", "c_min_red(24)=4/5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL cminred_table"));
}

#[test]
fn unknown_selectors_exit_two() {
    assert_eq!(run(&["run", "--claims", "no_such_claim"]).status.code(), Some(2));
    assert_eq!(run(&["run", "--claims", "small_d_list", "--expect", "bogus=1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["run", "--d-range", "9..3"]).status.code(), Some(2));
}

#[test]
fn json_report_round_trips() {
    let out = run(&["run", "--claims", "dimension_count_coeffs", "--format", "json", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    let cert = &v["certificates"][0];
    assert_eq!(cert["claim_id"], "dimension_count_coeffs");
    assert_eq!(cert["verdict"], "PASS");
}

#[test]
fn list_and_tables() {
    let out = run(&["list-claims"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("boundary_order2"));
    let out = run(&["show-tables", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap();
}

#[test]
fn report_written_to_file() {
    let dir = std::env::temp_dir().join(format!("ballquot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&["run", "--claims", "v8_split", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], 1);
    std::fs::remove_dir_all(&dir).ok();
}
