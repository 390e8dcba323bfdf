use std::path::PathBuf;
use std::process::{Command, Output};

use henselift::problem::parse_report_factors;
use henselift::{product, PadicContext, ProblemSpec};
use serde_json::Value;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_henselift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn profile_reports_special_mode() {
    let path = problem("decic_p3.json");
    let v = json(&run(&["profile", "--input", path.to_str().unwrap()]));
    assert_eq!(v["t"], 13);
    assert_eq!(v["t_prime"], 10);
    assert_eq!(v["mode"], "special");
    assert_eq!(v["required_s"], 24);

    let general = json(&run(&["profile", "--input", path.to_str().unwrap(), "--mode", "general"]));
    assert_eq!(general["mode"], "general");
    assert_eq!(general["t_prime"], Value::Null);
}

#[test]
fn lift_table_to_target() {
    let path = problem("cubic_p2.json");
    let out = run(&["lift", "--input", path.to_str().unwrap(), "--target", "514", "--table"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step  precision  defect");
    assert_eq!(lines.len(), 11);
    let precisions: Vec<u64> = lines[1..]
        .iter()
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(precisions, [3, 4, 6, 10, 18, 34, 66, 130, 258, 514]);
    // stable bytes across runs
    let again = run(&["lift", "--input", path.to_str().unwrap(), "--target", "514", "--table"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn json_report_round_trips() {
    let path = problem("cubic_p2.json");
    let v = json(&run(&["lift", "--input", path.to_str().unwrap(), "--target", "100", "--json"]));
    let (n, canonical, balanced) = parse_report_factors(&v).unwrap();
    assert_eq!(n, 100);
    let spec = ProblemSpec::from_json_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let ctx = PadicContext::new(2).unwrap();
    let modulus = ctx.pow(n);
    for gs in [&canonical, &balanced] {
        let residual = spec.f.sub(&product(gs));
        assert!(residual.iter().all(|c| (c % &modulus) == 0.into()));
    }
    for (c, b) in canonical.iter().zip(&balanced) {
        assert!(c.congruent_mod(b, n, &ctx));
    }
}

#[test]
fn steps_report_factor_accuracy() {
    let path = problem("cubic_p2.json");
    let out = run(&["lift", "--input", path.to_str().unwrap(), "--steps", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("factors modulo 2^5:"), "{}", stdout(&out));
}

#[test]
fn compare_advantage_is_m1() {
    let path = problem("decic_p3.json");
    let v = json(&run(&["compare", "--input", path.to_str().unwrap(), "--json"]));
    assert_eq!(v["advantage"], 1);
}

#[test]
fn check_suites_pass() {
    let path = problem("cubic_p2.json");
    let out = run(&["check", "--input", path.to_str().unwrap(), "--cases", "20"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn malformed_input_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"p": 2, "f": ["1", "x", "1"], "factors": [["0", "1"]], "s": 1}"#).unwrap();
    let out = run(&["profile", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("$.f[1]"));

    std::fs::write(&path, r#"{"p": 4, "f": ["0", "1"], "factors": [["0", "1"]], "s": 1}"#).unwrap();
    let out = run(&["profile", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn precondition_failure_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("low.json");
    std::fs::write(
        &path,
        r#"{"p": 2, "f": ["8", "-2", "1", "1"], "factors": [["0", "1"], ["2", "1"], ["7", "1"]], "s": 2}"#,
    )
    .unwrap();
    let out = run(&["lift", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["lift"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
