use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumprod-lab"))
        .args(args)
        .arg(format!("out={}", out.display()))
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn verify_all_passes_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["verify-all", "q=7"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path(), "verify.csv");
    assert!(csv.starts_with("suite,q,mode,cases,violations,status\n"));
    assert_eq!(csv.lines().count(), 16);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",0,pass")));
    let m: serde_json::Value = serde_json::from_str(&read(dir.path(), "verify-manifest.json")).unwrap();
    assert_eq!(m["config"]["q"], serde_json::json!([7]));
    assert_eq!(m["configHash"].as_str().unwrap().len(), 64);
    assert_eq!(m["provenance"].as_array().unwrap().len(), 15);
}

#[test]
fn sumprod_row_matches_known_minimum() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["sumprod", "q=13", "n=2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = read(dir.path(), "sumprod.csv");
    assert_eq!(csv.lines().nth(1), Some("13,2,3,exhaustive,78,,0 1"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["sumprod", "q=", "n=2"][..],
        &["sumprod", "q=12", "n=2"],
        &["sumprod", "q=7", "n=9"],
        &["kakeya", "q=17", "seed=1"],
        &["verify-all", "q=2"],
        &["distance", "q=7", "n=3", "colour=blue"],
    ] {
        let o = lab(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn bad_worker_count_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sumprod-lab"))
        .args(["sumprod", "q=7", "n=2"])
        .arg(format!("out={}", dir.path().display()))
        .env("SUMPROD_LAB_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let toml = dir.path().join("run.toml");
    fs::write(&toml, "q = [7, 11]\nn = \"2..3\"\nformat = \"json\"\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sumprod-lab"))
        .args(["sumprod", "--config"])
        .arg(&toml)
        .arg("q=5")
        .arg(format!("out={}", dir.path().display()))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: serde_json::Value = serde_json::from_str(&read(dir.path(), "sumprod.json")).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["q"] == 5));
}

#[test]
fn kakeya_writes_lines_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["kakeya", "q=3", "trials=2", "seed=4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(dir.path(), "kakeya-q3.lines").lines().count(), 13);
}

#[test]
fn plot_emits_one_script_per_result_kind() {
    let dir = tempfile::tempdir().unwrap();
    let empty = Command::new(env!("CARGO_BIN_EXE_sumprod-lab")).arg("plot").arg(dir.path()).output().unwrap();
    assert_eq!(empty.status.code(), Some(2));
    assert_eq!(lab(&["sumprod", "q=7", "n=2"], dir.path()).status.code(), Some(0));
    assert_eq!(lab(&["incidence", "q=7", "n=5", "seed=1", "trials=2"], dir.path()).status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_sumprod-lab")).arg("plot").arg(dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("plot_sumprod.py").is_file());
    assert!(dir.path().join("plot_incidence.py").is_file());
    assert!(!dir.path().join("plot_kakeya.py").exists());
    assert!(dir.path().join("sumprod-manifest.json").is_file());
    assert!(dir.path().join("incidence-manifest.json").is_file());
}

#[test]
fn seeded_runs_replay() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["distance", "q=11", "n=4", "mode=randomized", "trials=8", "seed=9"];
    assert_eq!(lab(&args, a.path()).status.code(), Some(0));
    assert_eq!(lab(&args, b.path()).status.code(), Some(0));
    assert_eq!(read(a.path(), "distance.csv"), read(b.path(), "distance.csv"));
    let hash = |d: &Path| {
        let m: serde_json::Value = serde_json::from_str(&read(d, "distance-manifest.json")).unwrap();
        m["configHash"].clone()
    };
    assert_eq!(hash(a.path()), hash(b.path()));
}
