use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horomori")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn picard_rank_of_the_plane() {
    let plane = fixture("plane.json");
    let v = json(&["picard", "--input", plane.to_str().unwrap(), "--emit", "json"]);
    assert_eq!(v["command"], "picard");
    assert_eq!(v["result"]["picard_rank"], 1);
    let digest = v["input_digest"].as_str().unwrap();
    assert!(digest.len() == 64 && digest.chars().all(|c| c.is_ascii_hexdigit()), "{digest}");
}

#[test]
fn find_curve_on_coloured_plane() {
    let f = fixture("rank1_coloured.json");
    let v = json(&["find-curve", "--input", f.to_str().unwrap(), "--divisor=-K", "--emit", "json"]);
    let text = v.to_string();
    assert!(text.contains("\"minus_k\":\"3\"") || text.contains("\"minus_k\":3"), "{text}");
}

#[test]
fn reports_are_deterministic() {
    let f = fixture("rank1_c2.json");
    let args = ["find-curve", "--input", f.to_str().unwrap(), "--divisor=-K", "--emit", "json"];
    let a = run(&args);
    let b = run(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = run(&seq);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn root_sweep_passes() {
    let v = json(&["verify-root-inequality", "--max-rank", "5", "--emit", "json"]);
    assert!(v["ledger"].as_array().unwrap().iter().all(|e| e["holds"] == true), "{v}");
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("horomori-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(run(&["picard", "--input", bad.to_str().unwrap()]).status.code(), Some(1));
    let missing = dir.join("missing.json");
    assert_eq!(run(&["picard", "--input", missing.to_str().unwrap()]).status.code(), Some(1));
    let plane = fixture("plane.json");
    let p = plane.to_str().unwrap();
    assert_eq!(run(&["run-mmp", "--input", p, "--divisor", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["run-mmp", "--input", p, "--divisor", "H", "--cap", "0"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
