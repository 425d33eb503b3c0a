use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coarse_cli::format::{space_from_json, to_json, ProfileInstanceDoc};
use coarse_core::bricks::alternating_intervals;
use coarse_core::profile::{Profile, ProfileInstance};
use coarse_core::{ExtReal, FiniteMetricSpace};
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarse")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write_space(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = path(dir, name);
    let mut all = vec!["space"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", p(&out)]);
    let res = run(&all);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    out
}

#[test]
fn interval_space_round_trips() {
    let dir = TempDir::new().unwrap();
    let file = write_space(&dir, "i10.json", &["--interval", "10"]);
    let space = space_from_json(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(space, FiniteMetricSpace::interval(10));
    let again = path(&dir, "again.json");
    assert_eq!(code(&run(&["space", "--from", p(&file), "-o", p(&again)])), 0);
    assert_eq!(fs::read(&file).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn grid_space_has_all_points() {
    let dir = TempDir::new().unwrap();
    let file = write_space(&dir, "g.json", &["--grid", "8x8", "--norm", "sup"]);
    let space = space_from_json(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(space.len(), 64);
    assert_eq!(space.dist(0, 63), ExtReal::finite(7.0));
}

#[test]
fn invalid_table_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    let doc = r#"{"name":"bad","points":["a","b","c"],"metric":{"kind":"table","dist":[[0,1,5],[1,0,1],[5,1,0]]}}"#;
    fs::write(&bad, doc).unwrap();
    let out = run(&["space", "--from", p(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_file_is_an_input_error() {
    assert_eq!(code(&run(&["space", "--from", "/nonexistent/space.json"])), 2);
    assert_eq!(code(&run(&["verify", "/nonexistent/report.json"])), 2);
}

#[test]
fn asdim_report_verifies_and_tampering_is_caught() {
    let dir = TempDir::new().unwrap();
    let space = write_space(&dir, "i64.json", &["--interval", "64"]);
    let report = path(&dir, "asdim.json");
    let out = run(&["decompose", "asdim", "--space", p(&space), "-r", "2", "-m", "2", "-o", p(&report)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&report);
    assert_eq!(doc["passed"], true);
    assert_eq!(code(&run(&["verify", p(&report)])), 0);

    let mut bad = doc.clone();
    bad["parts"][0]["certificate"]["bound"] = Value::from(1.0);
    let tampered = path(&dir, "tampered.json");
    fs::write(&tampered, serde_json::to_string(&bad).unwrap()).unwrap();
    assert_eq!(code(&run(&["verify", p(&tampered)])), 3);

    let mut bad = doc;
    bad["parts"][1]["points"] = Value::from(vec![0, 1, 2]);
    fs::write(&tampered, serde_json::to_string(&bad).unwrap()).unwrap();
    assert_eq!(code(&run(&["verify", p(&tampered)])), 3);
}

#[test]
fn refine_clusters_report() {
    let dir = TempDir::new().unwrap();
    let space = write_space(&dir, "i61.json", &["--interval", "61"]);
    let report = path(&dir, "refine.json");
    let out = run(&[
        "decompose", "refine", "--space", p(&space), "-r", "1", "-s", "5", "--set", "0..2,20..22,40..42", "-o",
        p(&report),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&report);
    assert_eq!(doc["passed"], true);
    let covered: usize = doc["parts"].as_array().unwrap().iter().map(|p| p["points"].as_array().unwrap().len()).sum();
    assert_eq!(covered, 6);
    assert_eq!(code(&run(&["verify", p(&report)])), 0);
}

#[test]
fn scaling_rows_and_empty_family() {
    let out = run(&["scaling", "--family", "64,128,256", "-r", "2", "-m", "1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,construction,r,m,max_bound,passed");
    assert_eq!(lines.len(), 4);
    let bounds: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(4).unwrap()).collect();
    assert!(bounds.windows(2).all(|w| w[0] == w[1]), "{bounds:?}");
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));

    let empty = run(&["scaling", "-r", "2", "-m", "1"]);
    assert_eq!(code(&empty), 0);
    assert_eq!(String::from_utf8(empty.stdout).unwrap(), "N,construction,r,m,max_bound,passed\n");
}

#[test]
fn grid_scaling_under_sup_norm() {
    let out = run(&["scaling", "--family", "16,32", "--grid", "--norm", "sup", "-r", "1", "-m", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")), "{text}");
}

#[test]
fn profile_instances_verify() {
    let dir = TempDir::new().unwrap();
    let i40 = FiniteMetricSpace::interval(40);
    let [even, odd] = alternating_intervals(40, 8);
    let inst = ProfileInstance {
        scales: vec![1.0, 2.0],
        parts: vec![vec![even], vec![odd]],
        bounds: vec![ExtReal::finite(7.0), ExtReal::finite(7.0)],
    };
    let good = path(&dir, "good.json");
    let profile = Profile::constants(&[1.0, 1.0]).unwrap();
    fs::write(&good, to_json(&ProfileInstanceDoc::new(&i40, &profile, &inst))).unwrap();
    assert_eq!(code(&run(&["verify", p(&good)])), 0);

    let strict = Profile::constants(&[1.0, 0.0]).unwrap();
    let bad = path(&dir, "bad.json");
    fs::write(&bad, to_json(&ProfileInstanceDoc::new(&i40, &strict, &inst))).unwrap();
    assert_eq!(code(&run(&["verify", p(&bad)])), 3);
}

#[test]
fn profile_arithmetic() {
    let out = run(&["profile", "product", "--p", r#"{"fns":[[[0,1]],[[0,2]]]}"#, "--q", r#"{"fns":[[[0,1]],[[0,3]]]}"#]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["fns"][0][0][1], 2.0);
    assert_eq!(doc["fns"][1][0][1], 11.0);
}

#[test]
fn same_seed_same_bytes() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.json");
    let b = path(&dir, "b.json");
    for f in [&a, &b] {
        assert_eq!(code(&run(&["--seed", "42", "space", "--random", "12", "-o", p(f)])), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let space = write_space(&dir, "i64.json", &["--interval", "64"]);
    let outs: Vec<Vec<u8>> = (0..2)
        .map(|_| run(&["decompose", "asdim", "--space", p(&space), "-r", "3", "-m", "1"]).stdout)
        .collect();
    assert!(!outs[0].is_empty());
    assert_eq!(outs[0], outs[1]);
}
