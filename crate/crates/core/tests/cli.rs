use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BASIC: &str = r#"{
  "model": "basic",
  "production": {"p": 6000, "alpha": 0.7, "lambda": 1000, "theta": 0.1, "gamma": 0.6,
                 "p_r": 4000, "alpha_r": 0.6, "beta": 1},
  "costs": {"K": 300, "c": 40, "c_d": 100, "c_p": 30, "c_s": 200, "c_u": 0, "h_s": 5, "h_r": 4}
}"#;

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn epq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epq")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_scenario(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn scenario(name: &str) -> String {
    scenarios().join(name).to_str().unwrap().to_owned()
}

fn solve_json(path: &str, extra: &[&str]) -> Value {
    let mut args = vec!["solve", "--scenario", path, "--json"];
    args.extend_from_slice(extra);
    let out = epq(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(bytes: &[u8]) -> (String, Vec<Vec<String>>) {
    let text = String::from_utf8(bytes.to_vec()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_owned();
    (header, lines.map(|l| l.split(',').map(str::to_owned).collect()).collect())
}

#[test]
fn solve_basic_reports_the_closed_form_cycle() {
    let report = solve_json(&scenario("basic.json"), &[]);
    let sol = &report["solution"];
    assert!((sol["t4_star"].as_f64().unwrap() - 0.199618).abs() < 1e-6);
    assert!((sol["t_star"].as_f64().unwrap() - 0.289145).abs() < 1e-6);
    assert!((sol["tc"].as_f64().unwrap() - 6166.0).abs() < 1.0);
    assert_eq!(sol["case_label"], "basic-complete");
    assert_eq!(report["coefficients"]["model"], "basic");
}

#[test]
fn solve_aggregated_lists_both_candidates() {
    let report = solve_json(&scenario("aggregated.json"), &[]);
    let candidates = report["coefficients"]["candidates"].as_array().unwrap();
    assert_eq!(candidates.len(), 2);
    assert_eq!(report["solution"]["case_label"], "aggregated-case-I");
    assert!((report["solution"]["t_star"].as_f64().unwrap() - 0.278332).abs() < 1e-6);
}

#[test]
fn force_partial_matches_complete_backlog() {
    let plain = solve_json(&scenario("basic.json"), &[]);
    let forced = solve_json(&scenario("basic.json"), &["--force-partial"]);
    assert_eq!(forced["solution"]["case_label"], "basic-partial");
    let (a, b) = (plain["solution"]["tc"].as_f64().unwrap(), forced["solution"]["tc"].as_f64().unwrap());
    assert!((a - b).abs() / a < 1e-4, "{a} vs {b}");
}

#[test]
fn text_output_is_flat_key_value() {
    let out = epq(&["solve", "--scenario", &scenario("basic.json")]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "solution.t4_star: 0.199618"));
    assert!(text.lines().all(|l| l.contains(": ")));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for path in [&first, &second] {
        let out = epq(&["solve", "--scenario", &scenario("aggregated.json"), "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(first).unwrap(), std::fs::read(second).unwrap());
}

#[test]
fn validate_reports_a_small_gap() {
    let out = epq(&["validate", "--scenario", &scenario("basic.json"), "--json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("gap"), "{text}");
}

#[test]
fn infeasible_rates_exit_two_and_name_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "bad.json", &BASIC.replace("\"alpha\": 0.7", "\"alpha\": 0.1"));
    let out = epq(&["solve", "--scenario", &path]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}

#[test]
fn malformed_scenario_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let truncated = write_scenario(dir.path(), "cut.json", &BASIC[..BASIC.len() / 2]);
    assert_eq!(code(&epq(&["solve", "--scenario", &truncated])), 2);
    let unknown = write_scenario(dir.path(), "extra.json", &BASIC.replace("\"K\": 300", "\"K\": 300, \"k2\": 1"));
    assert_eq!(code(&epq(&["solve", "--scenario", &unknown])), 2);
}

#[test]
fn setup_only_costs_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let body = BASIC
        .replace("\"c\": 40", "\"c\": 0")
        .replace("\"c_d\": 100", "\"c_d\": 0")
        .replace("\"c_p\": 30", "\"c_p\": 0")
        .replace("\"c_s\": 200", "\"c_s\": 0")
        .replace("\"h_s\": 5", "\"h_s\": 0")
        .replace("\"h_r\": 4", "\"h_r\": 0");
    let path = write_scenario(dir.path(), "k.json", &body);
    let out = epq(&["solve", "--scenario", &path]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_scenario_exits_four() {
    let out = epq(&["solve", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn unwritable_out_exits_four_and_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("report.json");
    let out = epq(&["solve", "--scenario", &scenario("basic.json"), "--out", target.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert!(!target.exists());

    let blocked = dir.path().join("blocked.json");
    std::fs::create_dir(&blocked).unwrap();
    let out = epq(&["export", "--scenario", &scenario("basic.json"), "--out", blocked.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers, vec![std::ffi::OsString::from("blocked.json")]);
}

#[test]
fn export_basic_peaks_near_the_maximum_stock() {
    let out = epq(&["export", "--scenario", &scenario("basic.json"), "--step", "0.001"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = csv_rows(&out.stdout);
    assert_eq!(header, "t,phase,serviceable,imperfect,recovered");
    let peak = rows.iter().map(|r| r[2].parse::<f64>().unwrap()).fold(f64::MIN, f64::max);
    assert!((peak - 200.818).abs() < 1.0, "{peak}");
    let times: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(times.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn export_with_cycle_step_gives_only_boundaries() {
    let out = epq(&["export", "--scenario", &scenario("basic.json"), "--step", "0.289145"]);
    assert_eq!(code(&out), 0);
    let (_, rows) = csv_rows(&out.stdout);
    let mut times: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    times.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    assert_eq!(times.len(), 6, "{times:?}");
}

#[test]
fn export_aggregated_recovered_stock_drains() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("agg.csv");
    let out = epq(&["export", "--scenario", &scenario("aggregated.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let (_, rows) = csv_rows(&std::fs::read(&path).unwrap());
    let recovered: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!((recovered[0] - 599.05).abs() < 0.1, "{}", recovered[0]);
    assert!(recovered.windows(2).all(|w| w[1] <= w[0] + 1e-9));
}

#[test]
fn invalid_step_is_rejected() {
    let out = epq(&["export", "--scenario", &scenario("basic.json"), "--step", "-1"]);
    assert_eq!(code(&out), 2);
}
