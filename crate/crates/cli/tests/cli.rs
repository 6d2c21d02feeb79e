use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(ledger: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsl2"))
        .arg("--ledger")
        .arg(ledger)
        .args(args)
        .env_remove("QSL2_LEDGER")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn top_cycle_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &dir.path().join("l.json"),
        &["--json", "top-cycle", "--i", "0", "--j", "0", "--l", "1"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "top-cycle");
    assert_eq!(v["pass"], true);
    assert_eq!(v["result"]["poly"], "q^-3 * X1");
    assert_eq!(v["parameters"]["l"], 1);
    assert!(v["error"].is_null());
}

#[test]
fn ledger_create_verify_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("l.json");
    let base = ["--json", "assemble-intertwiner", "--i", "1", "--j", "1", "--l", "2"];

    let first = run(&ledger, &base);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(json(&first)["result"]["ledger"], "created");

    let second = run(&ledger, &base);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(json(&second)["result"]["ledger"], "verified");

    let mut flipped = base.to_vec();
    flipped.push("--rho-prefactor");
    let third = run(&ledger, &flipped);
    assert_eq!(third.status.code(), Some(3));
    let v = json(&third);
    assert_eq!(v["pass"], false);
    assert!(v["error"].as_str().unwrap().contains("ledger conflict"));
}

#[test]
fn link_offsets_are_persisted() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("l.json");
    for (i, j, expected) in [
        ("0", "0", "q^-1"),
        ("0", "1", "1"),
        ("1", "0", "q^-4"),
        ("1", "1", "q^-1"),
    ] {
        let out = run(&ledger, &["--json", "link-check", "--i", i, "--j", j, "--lmax", "3"]);
        assert_eq!(out.status.code(), Some(0), "({i},{j})");
        let v = json(&out);
        for link in v["result"]["links"].as_array().unwrap() {
            assert_eq!(link["offset"], expected);
        }
    }
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&ledger).unwrap()).unwrap();
    assert_eq!(stored["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("l.json");
    let args = ["--json", "char-check", "--melzer", "--j", "1", "--vmax", "4"];
    let a = run(&ledger, &args);
    let b = run(&ledger, &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("l.json");
    assert_eq!(
        run(&ledger, &["top-cycle", "--i", "2", "--j", "0", "--l", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&ledger, &["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&ledger, &["char-check"]).status.code(), Some(2));
    assert_eq!(
        run(&ledger, &["wbasis", "--n", "3", "--m", "2,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &dir.path().join("l.json"),
        &["wheel-check", "--n", "2", "--l", "1", "--poly", "X1^2"],
    );
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("wheel-check: FAIL"));
}

#[test]
fn crystal_rule_switch_breaks_closure() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("l.json");
    let base = [
        "--json",
        "crystal-paths",
        "--n",
        "3",
        "--m",
        "1",
        "--xi1",
        "1",
        "--eta1",
        "0",
        "--xi0",
        "0",
    ];
    assert_eq!(run(&ledger, &base).status.code(), Some(0));
    let mut mirrored = base.to_vec();
    mirrored.extend(["--rule", "right-first"]);
    let out = run(&ledger, &mirrored);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["result"]["closure"]["escapees"].as_u64().unwrap() > 0);
}

#[test]
fn fock_subcommands_pass() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("l.json");
    for d in ["1", "2", "3", "4"] {
        assert_eq!(
            run(&ledger, &["fock-braid", "--display", d, "--m", "1"]).status.code(),
            Some(0)
        );
    }
    let dr = run(
        &ledger,
        &[
            "fock-drinfeld",
            "--relation",
            "dr6",
            "--level",
            "-1",
            "--max-degree",
            "1",
        ],
    );
    assert_eq!(dr.status.code(), Some(0));
    assert_eq!(
        run(&ledger, &["fock-xvm", "--i", "0", "--m", "0", "--truncation", "0"])
            .status
            .code(),
        Some(1)
    );
}
