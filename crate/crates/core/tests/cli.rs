//! End-to-end tests of the `auxmedian` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use auxmedian::cli::{parse_json_rows, RenderedTable};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_auxmedian"))
        .args(args)
        .env_remove("AUXMEDIAN_FORMAT")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn params_prints_derived_fields() {
    let p2 = data("pop2.json");
    let text = stdout(&run(&["params", "--params", p2.to_str().unwrap()]));
    assert!(text.contains("R = 1.11557"));
    assert!(text.contains("b = -239"));
    let p1 = data("pop1.json");
    let text = stdout(&run(&["params", "--params", p1.to_str().unwrap()]));
    assert!(text.contains("R = 0.97244"));
}

#[test]
fn params_from_csv_population() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pop.csv");
    let mut body = String::from("# demo\nx,y\n");
    for i in 0..41 {
        body.push_str(&format!("{},{}\n", i, 2 * i + (i % 3)));
    }
    std::fs::write(&path, body).unwrap();
    let text = stdout(&run(&["params", "--input", path.to_str().unwrap(), "--n", "10"]));
    assert!(text.contains("N = 41"));
    assert!(text.contains("M_x = 20"));
}

#[test]
fn table_json_round_trips() {
    let p1 = data("pop1.json");
    let out = stdout(&run(&["table", "--params", p1.to_str().unwrap(), "--format", "json"]));
    let rows = parse_json_rows(&out).unwrap();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0].estimator, "M_y");
    let again = RenderedTable { rows, format: auxmedian::cli::Format::Json, precision: 2 }.render();
    assert_eq!(again, out);
}

#[test]
fn format_comes_from_environment() {
    let p1 = data("pop1.json");
    let out = Command::new(env!("CARGO_BIN_EXE_auxmedian"))
        .args(["table", "--params", p1.to_str().unwrap(), "--estimators", "M_y"])
        .env("AUXMEDIAN_FORMAT", "csv")
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "estimator,analytic_mse,analytic_bias,empirical_mse,pre\nM_y,565443.57,0.00,,100.00\n");
}

#[test]
fn usage_errors_exit_with_two() {
    let p1 = data("pop1.json");
    let p1 = p1.to_str().unwrap();
    assert_eq!(run(&["table", "--params", p1, "--estimators", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["params", "--params", p1, "--input", p1]).status.code(), Some(2));
    assert_eq!(
        run(&["simulate", "--input", p1, "--n", "5", "--reps", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn data_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"N":69,"n":17,"median_y":2068}"#).unwrap();
    let out = run(&["table", "--params", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing key `median_x`"));
}

#[test]
fn compare_reports_every_check() {
    let p2 = data("pop2.json");
    let text = stdout(&run(&["compare", "--params", p2.to_str().unwrap()]));
    assert!(text.ends_with("5/5 checks pass\n"), "{text}");
}

#[test]
fn simulate_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"size":300,"log_mean_x":2.0,"log_mean_y":2.2,"log_sd_x":0.4,"log_sd_y":0.5,"log_corr":0.7,"seed":9}"#,
    )
    .unwrap();
    let report = dir.path().join("report.json");
    let out = stdout(&run(&[
        "simulate",
        "--synthetic",
        spec.to_str().unwrap(),
        "--n",
        "30",
        "--reps",
        "200",
        "--seed",
        "4",
        "--format",
        "csv",
        "--report",
        report.to_str().unwrap(),
    ]));
    assert_eq!(out.lines().count(), 5);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json["estimators"].as_array().unwrap().len(), 4);
    assert_eq!(json["config"]["reps"], 200);
}
