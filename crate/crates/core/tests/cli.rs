//! End-to-end runs of the command-line binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cryo-eo-sim");

const QUICK: &str = r#"
[mesh]
nr = 48
nz = 12
refine_source = 2.0

[solver]
end_time_s = 5e-6
"#;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN).args(args).current_dir(dir).env("CRYO_EO_SIM_LOG", "error").output().unwrap()
}

fn write_config(dir: &Path, extra: &str) -> String {
    let path = dir.join("run.toml");
    // top-level keys in `extra` must precede the tables
    fs::write(&path, format!("{extra}\n{QUICK}")).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn unknown_target_lists_choices() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["fig7z"], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sweep-power") && err.contains("fig4d"), "{err}");
}

#[test]
fn unknown_config_key_reports_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "[device]\nthickness_m = 2e-4\ncolour = \"red\"\n").unwrap();
    let out = run(&["sweep-power", "--config", path.to_str().unwrap()], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("colour") && err.contains("line 3"), "{err}");
}

#[test]
fn invalid_physics_is_rejected_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[device]\nthickness_m = -1e-4\n");
    let out = run(&["simulate-thermal", "--config", &cfg], dir.path());
    assert!(!out.status.success());
    assert!(!dir.path().join("out").join("history.csv").exists());
}

#[test]
fn coupling_sweep_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[sweep]\ngrid = [0.0, 0.5, 1.0]\n");
    let out = run(&["sweep-coupling", "--config", &cfg, "--out", "res"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("res/sweep_coupling.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "P_o_W,eta_mw,T_B_K,T_av_K,n_bar,C,F");
    assert!(lines[2].starts_with("0.001,0.5,"));
}

#[test]
fn thermal_simulation_writes_history_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[device]\nthickness_m = 2e-4\n[pump]\npower_W = 1e-3\n");
    let out = run(&["simulate-thermal", "--config", &cfg, "--out", "t", "--svg"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("t/history.csv")).unwrap();
    assert!(text.starts_with("t_s,T_av_K\n"));
    let last: f64 = text.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((0.147..0.221).contains(&last), "{last}");
    let svg = fs::read_to_string(dir.path().join("t/history.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[sweep]\nstart = 0.0\nstop = 1.5e-3\npoints = 9\ninterpolate = false\n");
    let mut outputs = Vec::new();
    for jobs in ["1", "4"] {
        let name = format!("j{jobs}");
        let out = run(&["sweep-power", "--config", &cfg, "--jobs", jobs, "--out", &name], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(fs::read(dir.path().join(&name).join("sweep_power.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn scenario_can_come_from_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "scenario = \"optimize\"\n[optimize]\nvariable = \"coupling\"\n");
    let out = run(&["run", "--config", &cfg, "--out", "o"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("eta*"));
    assert!(dir.path().join("o/optimum.csv").exists());
}
