use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adicscope")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("adicscope-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn csv_rows(text: &str) -> Vec<String> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(String::from).collect()
}

#[test]
fn validate_example_two() {
    let o = run(&["validate", "--example", "2", "--depth", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn headers_echo_version_config_and_thresholds() {
    let o = run(&["eigen", "--example", "2", "--depth", "4", "--b", "6", "--tau", "0.01", "--ladder-order", "sequential"]);
    let text = stdout(&o);
    assert!(text.starts_with(&format!("# adicscope {}\n", env!("CARGO_PKG_VERSION"))));
    assert!(text.contains("\"b\":6"));
    assert!(text.contains("\"tau\":0.01"));
    assert!(text.contains("\"ladder_order\":\"sequential\""));
    let j = json(&run(&["validate", "--example", "2", "--depth", "3", "--format", "json"]));
    assert_eq!(j["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(j["config"]["example"], 2);
    assert_eq!(j["thresholds"]["delta"], 0.05);
}

#[test]
fn eigen_accepts_the_sixth_root_on_example_two() {
    let o = run(&["eigen", "--example", "2", "--depth", "5", "--b", "6", "--I", "1,2,3,4,5,6,7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# accepted: true"));
    assert!(text.contains("# bb: 3"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 3 * 7);
    assert!(rows[0].starts_with("2,4,1,"));
}

#[test]
fn eigen_rejects_a_phase_count_above_the_set_size() {
    let o = run(&["eigen", "--example", "4", "--depth", "5", "--b", "6", "--I", "7"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("𝐛 > #I"));
    assert!(text.contains("# accepted: false"));
}

#[test]
fn eigen_reports_continuous_and_rejected_denominators() {
    let o = run(&["eigen", "--example", "2", "--depth", "4", "--b", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# status: continuous"));
    let o = run(&["eigen", "--example", "2", "--depth", "4", "--b", "11"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("# status: rejected"));
    let o = run(&["eigen", "--example", "2", "--depth", "4", "--b", "4", "--a", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sequential_ladder_order_is_stricter() {
    let o = run(&["eigen", "--example", "2", "--depth", "5", "--b", "6", "--ladder-order", "sequential"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("increases from (2,4) to (2,5)"));
}

#[test]
fn input_errors_exit_with_two() {
    let bad = scratch("bad.adic");
    std::fs::write(&bad, "adic-diagram v1\nrank 2\nlevels 2\nlevel 2 q 3\nword 1 1 x 1\nword 2 2 1 2\n").unwrap();
    let o = run(&["validate", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 5"), "{}", stderr(&o));
    assert_eq!(run(&["validate", "--file", "/nonexistent/x.adic"]).status.code(), Some(2));
    assert_eq!(run(&["validate"]).status.code(), Some(2));
    assert_eq!(run(&["validate", "--example", "2", "--file", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["validate", "--example", "2", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["kmap", "--example", "2", "--b", "6", "--m", "4", "--n", "9"]).status.code(), Some(2));
}

#[test]
fn example_files_round_trip_through_validate() {
    let path = scratch("ex5.adic");
    let o = run(&["example", "--example", "5", "--depth", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let file = path.to_str().unwrap();
    let from_file = run(&["words", "--file", file]);
    let built = run(&["words", "--example", "5", "--depth", "4"]);
    assert_eq!(csv_rows(&stdout(&from_file)), csv_rows(&stdout(&built)));
    assert_eq!(run(&["validate", "--file", file]).status.code(), Some(0));
    let truncated = run(&["matrices", "--file", file, "--depth", "3"]);
    assert_eq!(csv_rows(&stdout(&truncated)).len(), 2 * 49);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["converge", "--example", "2", "--depth", "5", "--b", "6", "--samples", "60", "--seed", "3", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["result"]["samples"], 60);
    let s = ["survey", "--example", "6", "--depth", "5", "--b-max", "8"];
    assert_eq!(run(&s).stdout, run(&s).stdout);
}

#[test]
fn survey_finds_the_claimed_denominators() {
    let j = json(&run(&["survey", "--example", "5", "--depth", "5", "--b-max", "8", "--format", "json"]));
    let measures = j["result"]["measures"].as_array().unwrap();
    assert_eq!(measures.len(), 2);
    assert_eq!(measures[0]["set"], serde_json::json!([1, 2, 3]));
    assert_eq!(measures[0]["accepted_bb"], serde_json::json!([3]));
    assert_eq!(measures[1]["accepted_bb"], serde_json::json!([2, 4]));
    assert_eq!(j["result"]["sum_b_mu"], 7);
    let j = json(&run(&["survey", "--example", "4", "--depth", "5", "--b-max", "6", "--I", "7", "--format", "json"]));
    assert_eq!(j["result"]["measures"][0]["accepted_bb"], serde_json::json!([]));
}

#[test]
fn cocycle_and_kmap_agree_with_the_model() {
    for kmap in ["model", "extract", "zero"] {
        let o = run(&["cocycle", "--example", "2", "--depth", "5", "--b", "6", "--kmap", kmap]);
        assert_eq!(o.status.code(), Some(0), "{kmap}");
        assert!(stdout(&o).contains("# passed: true"));
    }
    let o = run(&["kmap", "--example", "2", "--depth", "5", "--b", "6", "--m", "3", "--n", "5", "--format", "json"]);
    let entries = json(&o)["result"]["entries"].as_array().unwrap().clone();
    assert_eq!(entries.len(), 49);
    let k = |t1: u64, t2: u64| entries.iter().find(|e| e["t1"] == t1 && e["t2"] == t2).unwrap()["k"].as_u64().unwrap();
    assert_eq!((k(1, 2), k(2, 1), k(6, 4)), (1, 2, 1));
}

#[test]
fn psi_and_clean_match_the_class_structure() {
    let o = run(&["psi", "--example", "2", "--depth", "5", "--b", "6", "--m", "3", "--n", "5", "--t2", "1"]);
    let rows = csv_rows(&stdout(&o));
    assert!(rows[0].starts_with("0,\"1,4,7\","));
    assert!(rows[1].starts_with("1,\"3,6\","));
    assert!(rows[2].starts_with("2,\"2,5\","));
    let o = run(&["clean", "--example", "3", "--depth", "5"]);
    assert!(stdout(&o).contains("# sets: {1,2,3} {4,5,6}"));
}

#[test]
fn orbit_counts_down_the_entrance_time() {
    let o = run(&["orbit", "--example", "2", "--depth", "3", "--steps", "5"]);
    let times: Vec<u64> = csv_rows(&stdout(&o)).iter().map(|r| r.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(times, vec![781249, 781248, 781247, 781246, 781245, 781244]);
    let o = run(&["orbit", "--example", "2", "--depth", "3", "--top", "1", "--ranks", "50,15625", "--steps", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("maximal path reached"));
    let o = run(&["orbit", "--example", "2", "--depth", "3", "--top", "1", "--ranks", "50,15625", "--steps", "1", "--wrap"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1,781249,"));
}

#[test]
fn conformance_and_measures() {
    assert_eq!(run(&["conformance", "--example", "2", "--depth", "5"]).status.code(), Some(0));
    assert_eq!(run(&["conformance", "--example", "5", "--depth", "4"]).status.code(), Some(1));
    let o = run(&["measures", "--example", "2", "--depth", "5", "--exact"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 4 * 7);
    assert!(rows[0].starts_with("1,1,0.16,0.16,0.16"));
}

#[test]
fn expansion_limit_comes_from_the_environment() {
    let args = ["words", "--example", "2", "--depth", "3", "--m", "1", "--n", "3"];
    let o = Command::new(env!("CARGO_BIN_EXE_adicscope")).args(args).env("ADICSCOPE_MAX_EXPAND", "100").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("limit of 100"));
    let o = Command::new(env!("CARGO_BIN_EXE_adicscope")).args(args).env("ADICSCOPE_MAX_EXPAND", "lots").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
