//! End-to-end checks of the `nodalab` binary: exit-code contract, artifact
//! layout, summary marking, and the report/render verbs.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nodalab"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .canonicalize()
        .unwrap()
}

#[test]
fn run_writes_artifacts_and_exits_zero() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .arg("run")
        .arg(configs().join("acceptance/02-disk-p2-k2.toml"))
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert!(status.success());
    let dir = out.path().join("disk-p2-k2");
    for artifact in [
        "report.json",
        "solution.csv",
        "solution.grid.txt",
        "labels.txt",
        "nodal.ppm",
        "field.ppm",
        "harnack.csv",
    ] {
        assert!(dir.join(artifact).exists(), "missing {}", artifact);
    }
    let report = nodalab::scenario::report::RunReport::from_json(
        &std::fs::read_to_string(dir.join("report.json")).unwrap(),
    )
    .unwrap();
    assert!(report.all_passed);
    assert_eq!(report.checks.len(), 7);
    // harnack csv has the documented header
    let csv = std::fs::read_to_string(dir.join("harnack.csv")).unwrap();
    assert!(csv.starts_with("center_x,center_y,r,sup,inf,ratio,admissible\n"));
    // solution csv is x,y,u
    let csv = std::fs::read_to_string(dir.join("solution.csv")).unwrap();
    assert!(csv.starts_with("x,y,u\n"));
}

#[test]
fn failing_mock_exits_nonzero() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .arg("run")
        .arg(configs().join("mocks/spike.toml"))
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn parse_error_exits_two_without_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        r#"
name = "bad-expr"
[domain]
kind = "disk"
radius = 1.0
h = 0.0625
[operator]
name = "p-laplace"
p = 2.0
[boundary]
expr = "sin("
"#,
    )
    .unwrap();
    let out = tempfile::tempdir().unwrap();
    let output = bin()
        .arg("run")
        .arg(&bad)
        .arg("--out")
        .arg(out.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("boundary expression"), "stderr: {}", stderr);
    // no partial outputs
    assert!(!out.path().join("bad-expr").exists());
}

#[test]
fn suite_marks_exactly_the_failing_rows() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .arg("suite")
        .arg(configs().join("mocks"))
        .arg("--out")
        .arg(out.path())
        .arg("--jobs")
        .arg("2")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let summary = std::fs::read_to_string(out.path().join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert!(lines[0].starts_with("scenario,converged,harnack,"));
    // both mock rows fail, each for its own reason
    let spike = lines.iter().find(|l| l.starts_with("mock-interior-spike,")).unwrap();
    assert!(spike.contains(",fail,") && spike.ends_with("false,"));
    let nonconv = lines
        .iter()
        .find(|l| l.starts_with("mock-nonconverging,"))
        .unwrap();
    assert!(nonconv.contains("mock-nonconverging,false"));
    // timing is isolated in its own file
    assert!(out.path().join("timing.csv").exists());
    assert!(!summary.contains("wall_ms"));
}

#[test]
fn empty_suite_directory_is_an_error() {
    let empty = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let output = bin()
        .arg("suite")
        .arg(empty.path())
        .arg("--out")
        .arg(out.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn report_and_render_verbs_work() {
    let out = tempfile::tempdir().unwrap();
    bin()
        .arg("run")
        .arg(configs().join("acceptance/02-disk-p2-k2.toml"))
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    let report_path = out.path().join("disk-p2-k2/report.json");

    let output = bin().arg("report").arg(&report_path).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("scenario: disk-p2-k2"));
    assert!(text.contains("result:   PASS"));

    // remove the images, re-emit them from the text artifacts
    std::fs::remove_file(out.path().join("disk-p2-k2/nodal.ppm")).unwrap();
    std::fs::remove_file(out.path().join("disk-p2-k2/field.ppm")).unwrap();
    let output = bin().arg("render").arg(&report_path).output().unwrap();
    assert!(output.status.success());
    assert!(out.path().join("disk-p2-k2/nodal.ppm").exists());
    assert!(out.path().join("disk-p2-k2/field.ppm").exists());
    let ppm = std::fs::read(out.path().join("disk-p2-k2/nodal.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n"));
}

#[test]
fn render_without_artifacts_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    // a valid report with no sibling text artifacts
    let out = tempfile::tempdir().unwrap();
    bin()
        .arg("run")
        .arg(configs().join("acceptance/13-disk-p2-const.toml"))
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    let report = out.path().join("disk-p2-const/report.json");
    let lonely = dir.path().join("report.json");
    std::fs::copy(&report, &lonely).unwrap();
    let output = bin().arg("render").arg(&lonely).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("no renderable artifacts"));
}

#[test]
fn h_override_changes_resolution() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .arg("run")
        .arg(configs().join("acceptance/02-disk-p2-k2.toml"))
        .arg("--out")
        .arg(out.path())
        .arg("--h")
        .arg("0.0625")
        .arg("--tau")
        .arg("0.001")
        .status()
        .unwrap();
    assert!(status.success());
    let report = nodalab::scenario::report::RunReport::from_json(
        &std::fs::read_to_string(out.path().join("disk-p2-k2/report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report.domain.h, 0.0625);
    assert_eq!(report.provenance.tau_factors, vec![0.001]);
}

#[test]
fn out_dir_env_variable_is_honored() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .arg("run")
        .arg(configs().join("acceptance/13-disk-p2-const.toml"))
        .env(nodalab::scenario::OUT_DIR_ENV, out.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.path().join("disk-p2-const/report.json").exists());
}
