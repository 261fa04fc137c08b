//! End-to-end checks of the `symfock` binary: exit codes, output formats,
//! reproducibility, and re-parseability.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symfock"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn compare_emits_one_eighth_json() {
    let (code, stdout, _) = run(&["compare", "--omega1", "1", "--omega2", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(v["command"], "compare");
    assert!((v["total_mean"].as_f64().unwrap() - 0.125).abs() < 1e-12);
    assert_eq!(v["verdict"], "equivalent_finite");
}

#[test]
fn validate_standard_exits_zero() {
    let (code, stdout, _) = run(&["validate", "--J", "standard", "--n", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["passed"], true);
    for record in v["records"].as_array().unwrap() {
        assert!(record["residual"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn usage_error_exits_one() {
    let (code, _, stderr) = run(&["compare", "--bogus", "1"]);
    assert_eq!(code, 1);
    let first = stderr.lines().next().unwrap();
    let v: serde_json::Value = serde_json::from_str(first).expect("structured diagnostic");
    assert_eq!(v["error"], "usage");
}

#[test]
fn invariant_failure_exits_two() {
    // massless lattice is rejected: infrared zero mode
    let (code, _, stderr) = run(&["unruh", "--sites", "32", "--mass", "0"]);
    assert_eq!(code, 2);
    let first = stderr.lines().next().unwrap();
    let v: serde_json::Value = serde_json::from_str(first).unwrap();
    assert_eq!(v["error"], "invalid_argument");
}

#[test]
fn unruh_csv_shape_and_determinism() {
    let args = ["unruh", "--sites", "32", "--mass", "0.2", "--format", "csv"];
    let (code, first_run, _) = run(&args);
    assert_eq!(code, 0);
    let mut lines = first_run.lines();
    assert_eq!(
        lines.next().unwrap(),
        "mode,kappa,mean_occupation,bose_einstein,abs_rel_err"
    );
    let fields: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(fields.len(), 5);
    assert_eq!(fields[0], 0.0);
    assert!(fields[1] > 0.0);
    // deterministic: identical bytes on re-run
    let (_, second_run, _) = run(&args);
    assert_eq!(first_run, second_run);
}

#[test]
fn numdist_csv_round_trips_values() {
    let (code, stdout, _) = run(&[
        "numdist", "--omega1", "1", "--omega2", "2", "--nmax", "4", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<f64>> = stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    assert!((rows[0][1] - 2.0 * 2.0f64.sqrt() / 3.0).abs() < 1e-10);
    assert_eq!(rows[1][1], 0.0);
    // cumulative column is consistent with the probabilities
    let mut acc = 0.0;
    for row in &rows {
        acc += row[1];
        assert!((row[2] - acc).abs() < 1e-15);
    }
}

#[test]
fn output_file_and_config_sections() {
    let dir = std::env::temp_dir().join("symfock-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    let out = dir.join("out.json");
    std::fs::write(&cfg, "[compare]\nomega1 = 1\nomega2 = 2\n").unwrap();
    let (code, _, _) = run(&[
        "compare",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((v["total_mean"].as_f64().unwrap() - 0.125).abs() < 1e-12);
}

#[test]
fn missing_required_flags_are_usage_errors() {
    for args in [
        vec!["numdist", "--omega1", "1"],
        vec!["compare", "--omega1", "1", "--omega2", "2", "--omega2", "3"],
        vec!["unruh", "--sites", "32"],
        vec!["quantize"],
    ] {
        let (code, _, stderr) = run(&args);
        assert_eq!(code, 1, "args {args:?} should be a usage error: {stderr}");
    }
}

#[test]
fn help_lists_flags() {
    let (code, stdout, _) = run(&["unruh", "--help"]);
    assert_eq!(code, 0);
    for flag in [
        "--sites",
        "--spacing",
        "--mass",
        "--wedge-origin",
        "--out",
        "--format",
    ] {
        assert!(stdout.contains(flag), "help missing {flag}");
    }
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("compare"));
}
