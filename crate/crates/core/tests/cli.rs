use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sdpls"))
}

fn bundled(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name);
    std::fs::read_to_string(path).unwrap()
}

/// Writes `text` with `output_dir` redirected into `dir`.
fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let out = dir.join(format!("{name}_out"));
    let mut body: String = text
        .lines()
        .filter(|l| !l.starts_with("output_dir"))
        .map(|l| format!("{l}\n"))
        .collect();
    body += &format!("output_dir = {:?}\n", out.to_str().unwrap());
    let path = dir.join(format!("{name}.cfg"));
    std::fs::write(&path, body).unwrap();
    path
}

fn error_line(out: &Output) -> serde_json::Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().expect("stderr line");
    serde_json::from_str(line).unwrap_or_else(|e| panic!("not JSON ({e}): {line}"))
}

#[test]
fn run_writes_outputs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "vortex", &bundled("vortex2d.cfg"));
    let first = bin().arg("run").arg(&cfg).output().unwrap();
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let out = dir.path().join("vortex_out");
    let ts1 = std::fs::read(out.join("timeseries.csv")).unwrap();
    let vtk1 = std::fs::read(out.join("snapshot_002.vtk")).unwrap();
    assert!(out.join("reference.csv").exists());

    let text = String::from_utf8(ts1.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,t,x,theta_deg,kappa,grad_norm,dt"));
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(last[1], 0.875);
    // The angle grows towards 90 degrees.
    assert!(last[3] > 70.0 && last[3] < 90.0, "{}", last[3]);

    let second = bin().arg("run").arg(&cfg).output().unwrap();
    assert!(second.status.success());
    assert_eq!(std::fs::read(out.join("timeseries.csv")).unwrap(), ts1);
    assert_eq!(std::fs::read(out.join("snapshot_002.vtk")).unwrap(), vtk1);
}

#[test]
fn zero_end_time_gives_initial_record_only() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled("vortex2d.cfg")
        .replace("t_end = 0.875", "t_end = 0.0")
        .replace("[0.0, 0.5, 0.875]", "[0.0]");
    let cfg = write_config(dir.path(), "zero", &text);
    let out = bin().arg("run").arg(&cfg).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("zero_out/timeseries.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("0,0.0000000000000000e0,"));
}

#[test]
fn invalid_config_reports_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad",
        &bundled("vortex2d.cfg").replace("w2 = 0.15", "w2 = 0.01"),
    );
    let out = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let e = error_line(&out);
    assert_eq!(e["status"], "error");
    assert_eq!(e["kind"], "config");
    assert_eq!(e["key"], "w2");

    let missing = bin().arg("run").arg(dir.path().join("nope.cfg")).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(error_line(&missing)["kind"], "config");
}

#[test]
fn convergence_writes_table_and_rejects_bad_meshes() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled("vortex2d.cfg")
        .replace("t_end = 0.875", "t_end = 0.2")
        .replace("[0.0, 0.5, 0.875]", "[]");
    let cfg = write_config(dir.path(), "conv", &text);
    let out = bin()
        .args(["convergence"])
        .arg(&cfg)
        .args(["--meshes", "40,80", "--source", "off"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("conv_out/convergence_source_off/convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(dir
        .path()
        .join("conv_out/convergence_source_off/cells_80/timeseries.csv")
        .exists());

    let bad = bin()
        .args(["convergence"])
        .arg(&cfg)
        .args(["--meshes", "80,40"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(error_line(&bad)["kind"], "meshes");
}

#[test]
fn validate_field_verb() {
    for id in ["vortex_box", "time_periodic", "linear3d"] {
        let out = bin().args(["validate-field", id]).output().unwrap();
        assert!(out.status.success(), "{id}");
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(report["max_abs_divergence"].as_f64().unwrap() <= 1e-12);
        assert!(report["max_abs_wall_normal_velocity"].as_f64().unwrap() <= 1e-12);
    }
    let out = bin().args(["validate-field", "swirl"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_line(&out)["kind"], "velocity");
}
