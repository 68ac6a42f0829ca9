//! End-to-end tests of the `pisolve` binary: exit codes, report formats,
//! and the strategy-file round trip.

mod common;

use common::five_state_path;
use std::path::Path;
use std::process::{Command, Output};

fn pisolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pisolve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn sample() -> String {
    five_state_path().to_string_lossy().into_owned()
}

fn write_temp(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

const SINGLE_STATE: &str = r#"{
  "players": 1,
  "states": [
    {"id": 1, "owner": 1, "actions": [
      {"id": 1, "rewards": ["5"], "transitions": {"1": "1"}, "sojourn": "2"}
    ]}
  ]
}"#;

#[test]
fn validate_accepts_the_sample_instance() {
    let out = pisolve(&["validate", &sample()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("ok"));
}

#[test]
fn validate_rejects_malformed_json_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(dir.path(), "broken.json", "{ not json");
    let out = pisolve(&["validate", &path]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_reports_stochasticity_violations_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = SINGLE_STATE.replace("\"1\": \"1\"", "\"1\": \"9/10\"");
    let path = write_temp(dir.path(), "bad.json", &bad);
    let out = pisolve(&["validate", &path]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("state 1 action 1"), "missing location: {text}");
    assert!(text.contains("stochasticity"));
}

#[test]
fn solve_prints_the_value_vector() {
    let out = pisolve(&["solve", &sample()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    for value in ["3.4286", "2.0000", "2.6866"] {
        assert!(text.contains(value), "missing {value} in:\n{text}");
    }
}

#[test]
fn solve_single_initial_state_and_exact_output() {
    let out = pisolve(&["solve", &sample(), "--initial-state", "3", "--oracle", "--exact"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("2.6866"));
    assert!(text.contains("180/67"));
}

#[test]
fn solve_json_reports_are_byte_identical_without_timings() {
    let args = ["solve", &sample(), "--format", "json", "--no-timings", "--oracle"];
    let a = pisolve(&args);
    let b = pisolve(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(parsed["objectives"][0]["display"], "3.4286");
    assert_eq!(parsed["oracle"]["agrees"], true);
    assert!(parsed.get("timings").is_none());
}

#[test]
fn solve_with_oracle_and_lemma_verification_passes() {
    let out = pisolve(&["solve", &sample(), "--oracle", "--verify", "lemma", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["deviations"]["improving_found"], false);
}

#[test]
fn solve_dump_lp_lists_equations() {
    let out = pisolve(&["solve", &sample(), "--initial-state", "1", "--dump-lp"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# dual program, initial state 1"));
    assert!(text.contains("x[3,1] + x[3,2] - x[5,1] = 0"));
}

#[test]
fn single_state_instance_solves_to_the_one_line_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(dir.path(), "single.json", SINGLE_STATE);
    let out = pisolve(&["solve", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("2.5000"));
}

#[test]
fn enumerate_prints_sixteen_rows() {
    let out = pisolve(&["enumerate", &sample()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = text.lines().filter(|l| l.contains("->")).count();
    assert_eq!(rows, 16);
    assert!(text.contains("(2, 1, 1, 1, 1) -> (3.4286, 2.0000, 2.6667, 3.4286, 2.6667)"));
    assert!(text.contains("value vector: (3.4286, 2.0000, 2.6866, 3.4286, 2.6866)"));
}

#[test]
fn enumerate_cap_exceeded_exits_5_with_the_count() {
    let out = pisolve(&["enumerate", &sample(), "--cap", "4"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains("16"));
}

#[test]
fn enumerate_single_action_instance_prints_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(dir.path(), "single.json", SINGLE_STATE);
    let out = pisolve(&["enumerate", &path, "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 1);
    assert!(text.contains("5/2"));
}

#[test]
fn strategy_round_trip_through_verify_and_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let strategy_path = dir.path().join("strategy.json");
    let strategy = strategy_path.to_string_lossy().into_owned();

    let out = pisolve(&["solve", &sample(), "--emit-strategy", &strategy]);
    assert_eq!(out.status.code(), Some(0));

    // the emitted profile passes lemma-mode verification
    let out = pisolve(&["verify", &sample(), "--strategy", &strategy, "--mode", "lemma"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("no improving deviation"));

    // simulating it reproduces the analytic value on the deterministic cycle
    let out = pisolve(&[
        "simulate", &sample(), "--strategy", &strategy, "--initial-state", "1",
        "--steps", "100000", "--seed", "7", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = parsed["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3); // two players plus the spliced criterion
    let spliced = &rows[2];
    assert_eq!(spliced["analytic_exact"], "24/7");
    let estimate = spliced["estimate"].as_f64().unwrap();
    let analytic = spliced["analytic"].as_f64().unwrap();
    assert!((estimate - analytic).abs() < 1e-2);
}

#[test]
fn verify_own_reward_mode_reports_deviations_on_the_sample() {
    let dir = tempfile::tempdir().unwrap();
    let strategy_path = dir.path().join("strategy.json");
    let strategy = strategy_path.to_string_lossy().into_owned();
    let out = pisolve(&["solve", &sample(), "--emit-strategy", &strategy]);
    assert_eq!(out.status.code(), Some(0));

    let out = pisolve(&[
        "verify", &sample(), "--strategy", &strategy, "--mode", "definition3",
        "--format", "json",
    ]);
    // own-reward improvements exist on this instance; the exit code records it
    assert_eq!(out.status.code(), Some(7));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["improving_found"], true);
}

#[test]
fn simulate_single_step_gives_the_first_action_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let strategy_path = dir.path().join("strategy.json");
    let strategy = strategy_path.to_string_lossy().into_owned();
    let out = pisolve(&["solve", &sample(), "--emit-strategy", &strategy]);
    assert_eq!(out.status.code(), Some(0));

    let out = pisolve(&[
        "simulate", &sample(), "--strategy", &strategy, "--initial-state", "2",
        "--steps", "1", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // from state 2 the solved row plays action 1: ratio 4/2 on both criteria
    let spliced = &parsed["rows"][2];
    assert_eq!(spliced["estimate"].as_f64().unwrap(), 2.0);
}

#[test]
fn mismatched_strategy_exits_6() {
    let dir = tempfile::tempdir().unwrap();
    // rows address a six-state game; the instance has five states
    let wrong = r#"[{"player": 1, "rows": {"1": {"1": 1, "6": 1}}}]"#;
    let path = write_temp(dir.path(), "wrong.json", wrong);
    let out = pisolve(&["simulate", &sample(), "--strategy", &path, "--initial-state", "1"]);
    assert_eq!(out.status.code(), Some(6), "stderr: {}", stderr(&out));

    // incomplete rows are also a mismatch
    let partial = r#"[{"player": 1, "rows": {"1": {"1": 1}}}]"#;
    let path = write_temp(dir.path(), "partial.json", partial);
    let out = pisolve(&["simulate", &sample(), "--strategy", &path, "--initial-state", "1"]);
    assert_eq!(out.status.code(), Some(6), "stderr: {}", stderr(&out));
}

#[test]
fn reduce_emits_the_collapsed_process() {
    let out = pisolve(&["reduce", &sample()]);
    assert_eq!(out.status.code(), Some(0));
    let smdp = pisolve::io::parse_smdp(&stdout(&out)).unwrap();
    assert_eq!(smdp.num_states(), 5);
    assert_eq!(smdp.action(3, 1).reward, pisolve::rational::integer(7));
    let expected = pisolve::reduction::reduce(&common::load_five_state());
    assert_eq!(smdp, expected);
}
