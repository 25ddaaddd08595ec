//! End-to-end checks of the `prodavail` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use prodavail::{Report, REFERENCE_MODEL_JSON};

fn prodavail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodavail")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn reference_file(dir: &Path) -> PathBuf {
    write(dir, "reference.json", REFERENCE_MODEL_JSON)
}

#[test]
fn validate_reference_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = prodavail(&["validate", reference_file(dir.path()).to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(text(&out.stdout).trim(), "valid");
}

#[test]
fn validate_reports_pm_on_passive_unit() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(REFERENCE_MODEL_JSON).unwrap();
    v["pm_tasks"].as_array_mut().unwrap().push(serde_json::json!({
        "equipment_id": "Compressor-C",
        "interval_hours": 17520.0,
        "duration_hours": 12.0,
        "capacity_loss": 1.0,
        "align_with_shutdown": true
    }));
    let path = write(dir.path(), "bad.json", &v.to_string());
    let out = prodavail(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(text(&out.stdout).contains("pm-on-passive"), "{}", text(&out.stdout));
}

#[test]
fn validate_malformed_file_gives_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "broken.json", "{\n  \"horizon_hours\": 1.0,\n  ]\n");
    let out = prodavail(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(text(&out.stderr).contains("broken.json:3:3"), "{}", text(&out.stderr));
}

#[test]
fn missing_file_is_an_io_failure() {
    assert_eq!(code(&prodavail(&["validate", "/nonexistent/model.json"])), 1);
}

#[test]
fn simulate_writes_reproducible_report_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let model = reference_file(dir.path());
    let run = |name: &str, threads: &str| {
        let out_path = dir.path().join(name);
        let out = prodavail(&[
            "simulate",
            model.to_str().unwrap(),
            "--runs",
            "3",
            "--seed",
            "9",
            "--bucket",
            "1000",
            "--threads",
            threads,
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", text(&out.stderr));
        assert!(text(&out.stdout).contains("mean PA"));
        let mut report: Report = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
        report.generated_at = 0;
        let profile = std::fs::read_to_string(out_path.with_extension("profile.csv")).unwrap();
        (report, profile)
    };
    let (a, profile_a) = run("a.json", "1");
    let (b, profile_b) = run("b.json", "2");
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(profile_a, profile_b);

    assert_eq!((a.parameters.runs, a.parameters.seed, a.parameters.bucket_hours), (3, 9, 1000.0));
    assert_eq!(a.model_digest, prodavail::model_digest(&prodavail_core::build_reference_model()));
    let rows: Vec<&str> = profile_a.lines().collect();
    assert_eq!(rows[0], "bucket_start_hours,mean_throughput");
    assert_eq!(rows.len() - 1, 176);
    assert!(a.stats.mean_pa > 0.9 && a.stats.mean_pa < 1.0);
}

#[test]
fn zero_logistics_flag_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let model = reference_file(dir.path());
    let out_path = dir.path().join("z.json");
    let out = prodavail(&[
        "simulate",
        model.to_str().unwrap(),
        "--runs",
        "2",
        "--zero-logistics",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(report.parameters.zero_logistics);
    // digest identifies the input file, not the scenario
    assert_eq!(report.model_digest, prodavail::model_digest(&prodavail_core::build_reference_model()));
}

#[test]
fn indicators_for_esdv() {
    let dir = tempfile::tempdir().unwrap();
    let model = reference_file(dir.path());
    let out = prodavail(&["indicators", model.to_str().unwrap(), "--runs", "2", "--subsystems", "ESDV"]);
    assert_eq!(code(&out), 0, "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    let row = stdout.lines().find(|l| l.starts_with("ESDV")).expect("ESDV row");
    assert_eq!(row.split_whitespace().nth(1), Some("100.00%"));
}

#[test]
fn indicators_reject_bad_subsystem_lists() {
    let dir = tempfile::tempdir().unwrap();
    let model = reference_file(dir.path());
    let model = model.to_str().unwrap();
    assert_eq!(code(&prodavail(&["indicators", model, "--runs", "1", "--subsystems", ""])), 2);
    assert_eq!(code(&prodavail(&["indicators", model, "--runs", "1", "--subsystems", "Boiler"])), 2);
}

#[test]
fn simulate_refuses_invalid_model() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(REFERENCE_MODEL_JSON).unwrap();
    v["horizon_hours"] = (-1.0).into();
    let path = write(dir.path(), "neg.json", &v.to_string());
    assert_eq!(code(&prodavail(&["simulate", path.to_str().unwrap(), "--runs", "1"])), 2);
}

#[test]
fn reference_model_command_round_trips() {
    let out = prodavail(&["reference-model"]);
    assert_eq!(code(&out), 0);
    assert_eq!(text(&out.stdout), REFERENCE_MODEL_JSON);
}
