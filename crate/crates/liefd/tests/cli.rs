//! End-to-end checks of the command-line interface: exit codes, output
//! files, and byte-level determinism of repeated runs.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn liefd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liefd"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("liefd_cli_{tag}_{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

const SMALL_RUN: &str = "\
scheme = ftcs,semi
ic = shock
n_points = 64
cfl = 0.4
re_h = 2.0
t_end = 0.05
frames = 0,0.25
";

#[test]
fn run_writes_series_and_is_byte_deterministic() {
    let dir = temp_dir("run");
    let cfg_path = dir.join("run.cfg");
    let prefix = dir.join("series");
    fs::write(
        &cfg_path,
        format!("{SMALL_RUN}output = {}\n", prefix.display()),
    )
    .unwrap();

    let mut snapshots = Vec::new();
    for _ in 0..2 {
        let out = liefd().arg("run").arg(&cfg_path).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "csv"))
            .collect();
        files.sort();
        assert_eq!(files.len(), 4, "two schemes x two frames");
        snapshots.push(
            files
                .iter()
                .map(|p| fs::read(p).unwrap())
                .collect::<Vec<_>>(),
        );
    }
    assert_eq!(snapshots[0], snapshots[1], "repeated runs differ");

    let head = fs::read_to_string(dir.join("series_ftcs_F1.csv")).unwrap();
    assert!(head.starts_with("t,err\n"));
    assert!(dir.join("series_meta.txt").exists());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = temp_dir("badcfg");
    let cfg_path = dir.join("bad.cfg");
    fs::write(&cfg_path, "scheme = ftcs\nwhat = ever\n").unwrap();
    let out = liefd().arg("run").arg(&cfg_path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn strict_mode_reports_blowup_with_code_3() {
    let dir = temp_dir("strict");
    let cfg_path = dir.join("unstable.cfg");
    // CFL^2 > 2S violates the FTCS conditions and blows up quickly.
    fs::write(
        &cfg_path,
        format!(
            "scheme = ftcs\nic = shock\nn_points = 64\ncfl = 0.9\nre_h = 50\nt_end = 2.0\nframes = 0\noutput = {}\n",
            dir.join("u").display()
        ),
    )
    .unwrap();
    let out = liefd().arg("run").arg(&cfg_path).arg("--strict").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    // Without --strict the same run succeeds and flags the series.
    let out = liefd().arg("run").arg(&cfg_path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("blowup at step"), "stdout: {text}");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn stability_scan_and_symmetry_subcommands_work() {
    let out = liefd()
        .args(["stability", "ftcs", "--cfl", "0.5", "--s", "0.25"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("verdict: stable"), "{text}");

    let out = liefd()
        .args(["stability", "ftcs", "--cfl", "0.5", "--s", "0.6"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: unstable"));

    let out = liefd()
        .args(["scan", "cn", "--n", "20"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 disagreeing cells"));

    let out = liefd()
        .args(["verify-symmetries", "--equation", "burgers", "--samples", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    // All six generators verify as symmetries of Burgers.
    assert_eq!(text.matches("symmetry").count(), 6, "{text}");

    let out = liefd()
        .args(["verify-symmetries", "--equation", "cbkdv", "--samples", "5"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("broken"), "{text}");
}
