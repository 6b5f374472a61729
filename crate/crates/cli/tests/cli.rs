//! End-to-end checks of the `mubgame` binary: exit codes, output formats,
//! and file round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn mubgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mubgame"))
        .args(args)
        .env("MUBGAME_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("mubgame-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn verify_accepts_wf_family() {
    let out = mubgame(&["verify", "--dim", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("mutually unbiased: yes"));
}

#[test]
fn verify_rejects_non_prime() {
    let out = mubgame(&["verify", "--dim", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_passes_odd_primes() {
    for d in ["3", "7"] {
        let out = mubgame(&["certify", "--dim", d]);
        assert!(out.status.success(), "dim {d}");
        assert!(stdout(&out).contains("certified: guessing probability 1 attained"));
    }
}

#[test]
fn certify_refuses_dim_two() {
    let out = mubgame(&["certify", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("seesaw"), "points at the see-saw: {err}");
}

#[test]
fn classical_budget_exceeded_is_exit_three() {
    let out = mubgame(&["classical", "--dim", "11"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn classical_reports_value() {
    let out = mubgame(&["classical", "--dim", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("classical optimum 0.712386014"));
}

#[test]
fn seesaw_writes_json() {
    let path = tmp("seesaw.json");
    let out = mubgame(&[
        "seesaw",
        "--dim",
        "3",
        "--restarts",
        "5",
        "--seed",
        "9",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(value["best_value"].as_f64().unwrap() > 0.5);
    assert_eq!(value["per_restart"].as_array().unwrap().len(), 5);
    std::fs::remove_file(&path).ok();
}

#[test]
fn scan_csv_round_trips_through_file() {
    let path = tmp("scan.csv");
    let out = mubgame(&[
        "scan",
        "--dim",
        "2",
        "--mode",
        "exhaustive",
        "--restarts",
        "3",
        "--seed",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "dim,coin,mode,excluded,relabellings,value,seed");
    assert_eq!(lines.len(), 1 + 12); // 3 subsets x 4 tuples
    std::fs::remove_file(&path).ok();
}

#[test]
fn scan_rejects_unknown_mode() {
    let out = mubgame(&["scan", "--dim", "3", "--mode", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_csv_round_trips_exactly() {
    let path = tmp("bounds.csv");
    let out = mubgame(&[
        "bounds",
        "--dims",
        "2",
        "--seed",
        "5",
        "--restarts",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let rows = mubgame::bounds::from_csv(&text).unwrap();
    assert_eq!(rows.len(), 4);
    // re-emitting reproduces the file byte for byte
    assert_eq!(mubgame::bounds::to_csv(&rows), text);
    std::fs::remove_file(&path).ok();
}

#[test]
fn bounds_rejects_non_prime_dims() {
    let out = mubgame(&["bounds", "--dims", "2,4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("4 is not prime"));
}

#[test]
fn thread_cap_env_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_mubgame"))
        .args(["verify", "--dim", "3"])
        .env("MUBGAME_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
