use std::process::{Command, Output};

fn logspec(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logspec"))
        .args(args)
        .env("LOGSPEC_CACHE", cache)
        .env("LOGSPEC_THREADS", "1")
        .output()
        .expect("binary runs")
}

#[test]
fn spectrum_is_cached_and_certified() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = logspec(&["spectrum", "--N", "1", "--m", "2", "--h", "0.015625", "--k", "12"], &cache);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["eigenvalues"].as_array().unwrap().len(), 12);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);

    let file = dir.path().join("spec.json");
    std::fs::write(&file, &out.stdout).unwrap();
    let certs = logspec(&["bounds", "--spectrum", file.to_str().unwrap()], &cache);
    assert_eq!(certs.status.code(), Some(0), "{}", String::from_utf8_lossy(&certs.stderr));
    let list: Vec<serde_json::Value> = serde_json::from_slice(&certs.stdout).unwrap();
    assert!(list.iter().all(|c| c["verdict"] != "fail"));
    for key in ["name", "inputs", "bound_value", "observed_value", "verdict"] {
        assert!(list[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn failing_certificate_gives_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // eigenvalues far below the lower bound for m = 2
    let spec = serde_json::json!({
        "params": { "N": 1, "m": 2 },
        "domain": { "descriptor": { "kind": "interval", "a": 0.0, "b": 1.0 }, "h": 0.1, "cells": 10, "volume": 1.0 },
        "eigenvalues": [-100.0, -99.0],
        "residuals": [0.0, 0.0],
        "converged": [true, true],
        "method": "dense",
        "tolerance": 0.0
    });
    let file = dir.path().join("bad.json");
    std::fs::write(&file, spec.to_string()).unwrap();
    let out = logspec(&["bounds", "--spectrum", file.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_give_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(logspec(&["no-such-command"], dir.path()).status.code(), Some(2));
    assert_eq!(logspec(&["coeffs", "--N", "3"], dir.path()).status.code(), Some(2));
    assert_eq!(logspec(&["report", "--config", "/nonexistent/cfg.toml"], dir.path()).status.code(), Some(1));
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "N = 1\nm = 1\nk = 2\nladder = [0.1]\nbogus = 1\n[domain]\nkind = \"interval\"\na = 0.0\nb = 1.0\n").unwrap();
    let out = logspec(&["report", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
    let out = Command::new(env!("CARGO_BIN_EXE_logspec"))
        .args(["coeffs"])
        .env("LOGSPEC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn formulas_only_and_eval_op() {
    let dir = tempfile::tempdir().unwrap();
    let out = logspec(&["bounds", "--formulas-only", "--N", "2", "--m", "3", "--lambda1", "10"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((json["formulas"]["ball_bound_r0_half"].as_f64().unwrap() - 68.596_248_117_661_48).abs() < 1e-9);

    let out = logspec(&["eval-op", "--N", "1", "--m", "1", "--x", "0"], dir.path());
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let euler = 0.577_215_664_901_532_9;
    assert!((json["fourier"].as_f64().unwrap() + euler + std::f64::consts::LN_2).abs() < 1e-8);
}

#[test]
fn report_and_demo_composition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "N = 1\nm = 2\nk = 10\nladder = [0.03125, 0.015625, 0.0078125]\nsuites = [\"berezin\", \"eig_lower\"]\noutput = {:?}\n[domain]\nkind = \"interval\"\na = 0.0\nb = 1.0\n",
            dir.path().join("out")
        ),
    )
    .unwrap();
    let out = logspec(&["report", "--config", cfg.to_str().unwrap()], &dir.path().join("cache"));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("out/report.json").exists());

    let out = logspec(&["demo-composition", "--h", "0.03125", "--k", "5"], &dir.path().join("cache"));
    assert!(out.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 5);
}
