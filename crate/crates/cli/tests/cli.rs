use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

const SMALL: &str = r#"
[problem]
variant = "whole_line"
d_u = 1
d_v = 1
k = 10
u0 = 1
v0 = 1
horizon = 0.2

[grid]
x_left = -10
x_right = 10
nx = 200
dt = 1e-3
snapshot_every = 0.05

[analysis]
comparison_pairs = 2
"#;

fn run(dir: &Path, config: &str, args: &[&str]) -> (i32, String) {
    let path = dir.join("config.toml");
    fs::write(&path, config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_segfront"))
        .arg("--config")
        .arg(&path)
        .arg("--output")
        .arg(dir.join("out"))
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("out/manifest.json")).unwrap()).unwrap()
}

#[test]
fn zero_diffusivity_of_u_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let (code, err) = run(tmp.path(), &SMALL.replace("d_u = 1", "d_u = 0"), &["profile"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn unwritable_output_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let file = tmp.path().join("occupied");
    fs::write(&file, "").unwrap();
    let cfg = tmp.path().join("config.toml");
    fs::write(&cfg, SMALL).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_segfront"))
        .args(["--quiet", "--config"])
        .arg(&cfg)
        .arg("--output")
        .arg(file.join("nested"))
        .arg("solve")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_monotone_table_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!(
        "{SMALL}\n[problem.kinetics]\nkind = \"tabulated\"\n[problem.kinetics.table]\nu_grid = [0, 1]\nv_grid = [0, 1, 2]\nvalues = [[0, 0, 0], [0, 2, 1]]\n"
    );
    let (code, err) = run(tmp.path(), &cfg, &["solve"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn missing_config_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_segfront"))
        .arg("--config")
        .arg(tmp.path().join("absent.toml"))
        .arg("profile")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn symmetric_profile_has_front_at_origin() {
    let tmp = TempDir::new().unwrap();
    let (code, err) = run(tmp.path(), SMALL, &["profile"]);
    assert_eq!(code, 0, "{err}");
    let header: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/profile.json")).unwrap()).unwrap();
    assert_eq!(header["profile"]["a"].as_f64().unwrap(), 0.0);
    assert_eq!(header["passed"], true);
    let csv = fs::read_to_string(tmp.path().join("out/profile.csv")).unwrap();
    assert!(csv.starts_with("eta,f,u,v\n"));
    assert_eq!(csv.lines().count(), 802);
    let m = manifest(tmp.path());
    assert_eq!(m["command"], "profile");
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["config_hash"].as_str().unwrap().len(), 64);
    assert!(m["wall_time_s"]["total"].as_f64().unwrap() >= 0.0);
}

#[test]
fn half_line_immobile_profile_moves_right() {
    let tmp = TempDir::new().unwrap();
    let cfg = SMALL.replace("whole_line", "half_line").replace("d_v = 1", "d_v = 0").replace("x_left = -10", "x_left = 0");
    let (code, err) = run(tmp.path(), &cfg, &["profile"]);
    assert_eq!(code, 0, "{err}");
    let header: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/profile.json")).unwrap()).unwrap();
    assert!(header["profile"]["a"].as_f64().unwrap() > 0.0);
}

#[test]
fn solve_without_reaction_writes_snapshots() {
    let tmp = TempDir::new().unwrap();
    let (code, err) = run(tmp.path(), &SMALL.replace("k = 10", "k = 0"), &["solve"]);
    assert_eq!(code, 0, "{err}");
    let index = fs::read_to_string(tmp.path().join("out/snapshots.csv")).unwrap();
    assert_eq!(index.lines().count(), 1 + 5);
    let last = fs::read_to_string(tmp.path().join("out/snapshots/snapshot_0004.csv")).unwrap();
    assert!(last.starts_with("x,u,v,w\n"));
    assert_eq!(last.lines().count(), 201);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/trajectory.json")).unwrap()).unwrap();
    assert_eq!(summary["bounds_held"], true);
    assert!(summary["failure"].is_null());
}

#[test]
fn single_value_sweep_passes() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!("{SMALL}\n[sweep]\naxis = \"k\"\nvalues = [10]\n");
    let (code, err) = run(tmp.path(), &cfg, &["sweep"]);
    assert_eq!(code, 0, "{err}");
    let csv = fs::read_to_string(tmp.path().join("out/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.starts_with("k,l2_window_error_u"));
}

#[test]
fn sweep_without_section_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let (code, err) = run(tmp.path(), SMALL, &["sweep"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn longtime_single_time_passes() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!("{SMALL}\n[sweep]\naxis = \"time\"\nvalues = [0.2]\n");
    let (code, err) = run(tmp.path(), &cfg, &["longtime"]);
    assert_eq!(code, 0, "{err}");
    assert!(tmp.path().join("out/longtime.csv").exists());
}

#[test]
fn loose_reaction_tolerance_fails_verification() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!("{SMALL}\n[solver]\nreaction_tol = 1e-2\n");
    let (code, err) = run(tmp.path(), &cfg, &["--workers", "1", "verify"]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("reaction conservation"), "{err}");
    let card: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("out/scorecard.json")).unwrap()).unwrap();
    assert_eq!(card["passed"], false);
}

#[test]
fn repeated_runs_write_identical_csv() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let cfg = format!("{SMALL}\n[sweep]\naxis = \"k\"\nvalues = [1, 10]\n");
    assert_eq!(run(a.path(), &cfg, &["--seed", "7", "sweep"]).0, 0);
    assert_eq!(run(b.path(), &cfg, &["--seed", "7", "sweep"]).0, 0);
    let read = |d: &TempDir| fs::read_to_string(d.path().join("out/sweep.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_eq!(manifest(a.path())["config_hash"], manifest(b.path())["config_hash"]);
}
