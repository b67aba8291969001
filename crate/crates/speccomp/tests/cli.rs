//! End-to-end runs of the `speccomp` binary.

use std::fs;
use std::process::Command;

fn speccomp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_speccomp"))
}

#[test]
fn writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name);
    let status = speccomp()
        .args([
            "--a", "3", "--v0", "100", "--mass", "0.5", "--hbar", "1", "--n-max", "12",
        ])
        .arg("--out-csv")
        .arg(path("t.csv"))
        .arg("--out-json")
        .arg(path("t.json"))
        .arg("--out-svg")
        .arg(path("t.svg"))
        .arg("--out-dat")
        .arg(path("t.dat"))
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(path("t.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.starts_with("n,E_exact,E_pt2,E_po,"));
    assert!(fs::read_to_string(path("t.svg"))
        .unwrap()
        .contains("marker po"));
    assert_eq!(
        fs::read_to_string(path("t.dat")).unwrap().lines().count(),
        13
    );
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(path("t.json")).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn prints_csv_without_output_paths() {
    let out = speccomp()
        .args(["--alpha", "10", "--n-max", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# reference well\nalpha = 450\nn-max = 8\n").unwrap();
    let out = speccomp()
        .arg("--config")
        .arg(&cfg)
        .args(["--n-max", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);
}

#[test]
fn configuration_errors_exit_one() {
    for args in [
        vec!["--alpha", "10", "--a", "2"],
        vec![
            "--alpha", "451", "--a", "3", "--v0", "100", "--mass", "0.5", "--hbar", "1",
        ],
        vec!["--alpha", "10", "--n-min", "5", "--n-max", "2"],
        vec!["--a", "1"],
        vec!["--no-such-flag"],
        vec!["--alpha", "ten"],
        vec!["--config", "/nonexistent/run.cfg"],
    ] {
        let out = speccomp().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_names_path() {
    let out = speccomp()
        .args([
            "--alpha",
            "10",
            "--n-max",
            "2",
            "--out-csv",
            "/nonexistent/dir/t.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("/nonexistent/dir/t.csv"));
}

#[test]
fn oracle_report() {
    let out = speccomp()
        .args([
            "--alpha",
            "450",
            "--n-min",
            "20",
            "--n-max",
            "20",
            "--oracle",
            "--verbose",
            "--nu-max",
            "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("n,omega_1,omega_1_oracle"));
    assert!(text.lines().any(|l| l.starts_with("20,")));
    assert!(text.lines().any(|l| l.starts_with("LR,3,")));
}

#[test]
fn help_exits_zero() {
    let out = speccomp().arg("--help").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("--orbit-max-len"));
}
