use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifttpin"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_report(args: &[&str]) -> Value {
    let mut all = vec!["simulate", "--format", "json"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ifttpin-cli-{}-{name}", std::process::id()))
}

#[test]
fn roth_report_stays_in_three_to_four() {
    let r = json_report(&["--mode", "roth", "--samples", "1000", "--seed", "7"]);
    assert_eq!(r["completed"], 1000);
    assert!(r["clicks_per_digit"]["min"].as_f64().unwrap() >= 3.0);
    assert!(r["clicks_per_digit"]["max"].as_f64().unwrap() <= 4.0);
}

#[test]
fn iftt_lazy_fixed_pin_completes() {
    let r = json_report(&["--mode", "iftt", "--policy", "lazy", "--pin", "1234"]);
    assert_eq!(r["completed"], 1);
    assert_eq!(r["decoded_exactly"], 1);
}

#[test]
fn trad_is_one_click_per_digit() {
    let r = json_report(&["--mode", "trad", "--samples", "20"]);
    assert_eq!(r["clicks_per_digit"]["mean"], 1.0);
}

#[test]
fn same_seed_same_bytes() {
    let args = [
        "simulate",
        "--mode",
        "iftt",
        "--policy",
        "subset-3",
        "--samples",
        "50",
        "--seed",
        "9",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn suto_scores() {
    for (e, d, want) in [
        ("7.91", "0.12", "65.92"),
        ("10.92", "1.03", "10.60"),
        ("5", "5", "1.00"),
    ] {
        let o = run(&["suto", "--enter-rate", e, "--decode-rate", d]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want);
    }
    let o = run(&["suto", "--enter-rate", "5", "--decode-rate", "0"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("lower-bounds"));
}

#[test]
fn attack_recovers_completed_pin_and_not_prefix() {
    let path = tmp("full.json");
    let o = run(&[
        "simulate",
        "--mode",
        "iftt",
        "--pin",
        "8051",
        "--seed",
        "3",
        "--transcript-out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = run(&["attack", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pin: 8051"));

    let t = ifttpin_core::Transcript::load(&path).unwrap();
    let short = tmp("short.json");
    let cut = t.prefix(t.events.len() - 1);
    cut.write(std::fs::File::create(&short).unwrap()).unwrap();
    let o = run(&["attack", short.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pin"], Value::Null);
    assert!(v["positions"][3].as_array().unwrap().len() >= 2);
    let _ = std::fs::remove_file(path);
    let _ = std::fs::remove_file(short);
}

#[test]
fn attack_reads_trad_transcript() {
    let path = tmp("trad.json");
    let o = run(&[
        "simulate",
        "--mode",
        "trad",
        "--pin",
        "0429",
        "--transcript-out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = run(&["attack", path.to_str().unwrap()]);
    assert!(stdout(&o).contains("pin: 0429"));
    let _ = std::fs::remove_file(path);
}

#[test]
fn attack_rejects_garbage() {
    let path = tmp("garbage.json");
    std::fs::write(&path, "{ not json").unwrap();
    let o = run(&["attack", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(
        run(&["attack", "/definitely/missing.json"]).status.code(),
        Some(2)
    );
    let _ = std::fs::remove_file(path);
}

#[test]
fn bad_flags_fail_with_usage() {
    for args in [
        &["simulate", "--mode", "abacus"][..],
        &["simulate", "--policy", "subset-x"],
        &["simulate", "--pin", "12z4"],
        &["suto", "--enter-rate", "1"],
    ] {
        let o = run(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["simulate", "attack", "suto", "serve"] {
        let o = run(&[sub, "--help"]);
        assert!(o.status.success(), "{sub}");
        assert!(stdout(&o).contains("Usage"));
    }
}

#[test]
fn serve_fails_on_bad_bind() {
    let o = run(&["serve", "--host", "256.0.0.1", "--port", "1"]);
    assert!(!o.status.success());
}
