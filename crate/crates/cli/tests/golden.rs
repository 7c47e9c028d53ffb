//! Runs the binary on fixed inputs and compares output byte-for-byte with
//! files under `tests/golden`. Set `BLESS=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const PHI: &str = "(1+1*sqrt(5))/2";
const BETA: &str = "(-1+1*sqrt(5))/2";

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bsgraph"));
    cmd.current_dir(root().join("fixtures")).args(args).env_remove("BSGRAPH_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn check_golden(name: &str, actual: &str) {
    let path = root().join("golden").join(name);
    if std::env::var_os("BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(actual, expected, "output differs from {name}");
}

/// Runs, checks the exit code and compares standard output with `golden`.
fn case(golden: &str, args: &[&str], code: i32) -> Output {
    let out = run(args, &[]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {stderr}");
    check_golden(golden, &String::from_utf8(out.stdout.clone()).unwrap());
    if golden.ends_with(".json") {
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("JSON output re-parses");
        assert!(v["schema"].as_str().unwrap().starts_with("bsgraph."));
    }
    out
}

fn error_of(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().unwrap_or_default();
    serde_json::from_str(line).unwrap_or_else(|_| panic!("stderr is not a JSON error: {text}"))
}

fn verdict(out: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    v["verdict"].as_str().unwrap().to_string()
}

#[test]
fn analyze_golden_lattice_has_finitely_many_gaps() {
    let out = case("analyze_phi_finite.json", &["analyze", "--config", "golden_n1.conf"], 0);
    assert_eq!(verdict(&out), "FiniteNonzero");
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("FiniteNonzero"));
}

#[test]
fn analyze_kirchhoff_has_no_gaps() {
    let out = case("analyze_phi_kirchhoff.json", &["analyze", "--theta", PHI, "--alpha", "0"], 0);
    assert_eq!(verdict(&out), "NoGaps");
}

#[test]
fn analyze_strong_coupling_is_infinite() {
    let out = case("analyze_phi_infinite.json", &["analyze", "--theta", PHI, "--alpha", "10"], 0);
    assert_eq!(verdict(&out), "Infinite");
}

#[test]
fn flags_override_config_file() {
    let out = run(&["analyze", "--config", "golden_n1.conf", "--alpha", "10"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(verdict(&out), "Infinite");
}

#[test]
fn gaps_golden_window_json_and_csv() {
    case("gaps_phi_n1.json", &["gaps", "--config", "golden_n1.conf"], 0);
    case("gaps_phi_n1.csv", &["gaps", "--config", "golden_n1.conf", "--format", "csv"], 0);
}

#[test]
fn gaps_positive_coupling_silver_ratio() {
    case("gaps_silver_positive.csv", &["gaps", "--theta", "(1+1*sqrt(2))/1", "--alpha", "8", "--kmax", "30", "--format", "csv"], 0);
}

#[test]
fn gaps_write_output_file() {
    let dir = std::env::temp_dir().join(format!("bsgraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gaps.csv");
    let out = run(&["gaps", "--config", "golden_n1.conf", "--format", "csv", "--out", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, std::fs::read_to_string(root().join("golden/gaps_phi_n1.csv")).unwrap());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn window_for_one_two_three_gaps() {
    case("window_n1.json", &["window", "--N", "1"], 0);
    case("window_n2.json", &["window", "--N", "2"], 0);
    case("window_n3_a2.json", &["window", "--N", "3", "--a", "2"], 0);
}

#[test]
fn construct_each_scheme() {
    case("construct_t3_t.json", &["construct", "--beta", BETA, "--t", "3", "--scheme", "t"], 0);
    case("construct_t3_tt.json", &["construct", "--beta", BETA, "--t", "3", "--scheme", "tt"], 0);
    case("construct_t3_1t.json", &["construct", "--beta", BETA, "--t", "3", "--scheme", "1t"], 0);
}

#[test]
fn construct_rejects_t2() {
    let out = run(&["construct", "--beta", BETA, "--t", "2"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let e = error_of(&out);
    assert_eq!(e["error"]["kind"], "lattice");
    assert!(e["error"]["message"].as_str().unwrap().contains("t = 2"));
}

#[test]
fn scan_kirchhoff_lattice_has_no_gaps() {
    let args = ["scan", "--cell", "kirchhoff_lattice.cell", "--kmin", "0.5", "--kmax", "3", "--kstep", "0.25", "--theta-res", "8"];
    let out = case("scan_kirchhoff.csv", &args, 0);
    assert!(!String::from_utf8_lossy(&out.stdout).contains(",gap,"));
}

#[test]
fn scan_golden_delta_lattice_finds_the_gap() {
    let args = [
        "scan", "--cell", "golden_delta_lattice.cell", "--kmin", "3.0", "--kmax", "3.2", "--kstep", "0.02", "--theta-res", "16",
        "--format", "json",
    ];
    let out = case("scan_golden_delta.json", &args, 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let gaps: Vec<_> = v["intervals"].as_array().unwrap().iter().filter(|i| i["label"] == "gap").collect();
    assert_eq!(gaps.len(), 1);
    let right = gaps[0]["k_right"].as_f64().unwrap();
    assert!((right - std::f64::consts::PI).abs() < 1e-6, "{right}");
}

#[test]
fn scan_scale_invariant_chain_from_config() {
    case("scan_reflector.csv", &["scan", "--config", "scan_reflector.conf"], 0);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["scan", "--config", "scan_reflector.conf"];
    let one = run(&args, &[("BSGRAPH_THREADS", "1")]);
    let four = run(&args, &[("BSGRAPH_THREADS", "4")]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn input_errors_exit_with_code_two() {
    let cases: [&[&str]; 6] = [
        &["analyze", "--alpha", "1"],
        &["analyze", "--theta", "junk", "--alpha", "1"],
        &["gaps", "--theta", PHI, "--alpha", "1", "--kmax", "-3"],
        &["window", "--N", "0"],
        &["analyze", "--theta", PHI, "--alpha", "1", "--bogus"],
        &["window", "--N", "1", "--format", "csv"],
    ];
    for args in cases {
        let out = run(args, &[]);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_of(&out)["error"]["exit_code"], 2);
    }
    let out = run(&["window", "--N", "1"], &[("BSGRAPH_THREADS", "zero")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["analyze", "--config", "missing.conf"], &[]);
    assert_eq!(error_of(&out)["error"]["kind"], "io");
}

#[test]
fn malformed_config_is_reported() {
    let dir = std::env::temp_dir().join(format!("bsgraph-conf-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.conf");
    std::fs::write(&path, "theta (1+1*sqrt(5))/2\n").unwrap();
    let out = run(&["analyze", "--config", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["error"]["kind"], "config");
    std::fs::write(&path, "nonsense = 1\n").unwrap();
    let out = run(&["analyze", "--config", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn help_exits_cleanly() {
    let out = run(&["--help"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("analyze"));
}
