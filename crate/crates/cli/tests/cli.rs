use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlss"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn first_edge(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    let line = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .nth(1)
        .expect("at least one edge")
        .to_string();
    line.split_whitespace().collect::<Vec<_>>().join(",")
}

#[test]
fn gen_edge_counts() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["gen", "--k", "2", "--n", "8", "--beta", "0", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("kuniform 2 8 8\n"));
    assert_eq!(text.lines().count(), 9);

    let out = run(dir.path(), &["gen", "--k", "3", "--n", "6", "--mode", "dense", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("kuniform 3 6 14\n"));
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    for name in ["a.txt", "b.txt"] {
        let out = run(dir.path(), &["gen", "--k", "3", "--n", "10", "--beta", "0.3", "--seed", "42", "--out", name]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(dir.path().join("a.txt")).unwrap(), fs::read(dir.path().join("b.txt")).unwrap());
}

#[test]
fn build_share_reconstruct_round_trip() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["gen", "--k", "2", "--n", "8", "--beta", "0.2", "--seed", "5", "--out", "h.txt"])), 0);
    assert_eq!(code(&run(d, &["build", "--in", "h.txt", "--beta", "0.2", "--seed", "9", "--out", "s.txt"])), 0);
    assert!(d.join("s.txt.report").exists());
    assert_eq!(code(&run(d, &["share", "--in", "s.txt", "--secret", "6", "--seed", "2", "--out", "sh.txt"])), 0);
    let edge = first_edge(&d.join("h.txt"));
    let out = run(d, &["reconstruct", "--in", "s.txt", "--shares", "sh.txt", "--subset", &edge]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "6");
    let out = run(d, &["reconstruct", "--in", "s.txt", "--shares", "sh.txt", "--subset", "1,2,3"]);
    assert_eq!(stdout(&out).trim(), "6");
}

#[test]
fn unqualified_pair_exit_code() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("h.txt"), "kuniform 2 4 1\n1 2\n").unwrap();
    assert_eq!(code(&run(d, &["build", "--in", "h.txt", "--seed", "1", "--out", "s.txt"])), 0);
    assert_eq!(code(&run(d, &["share", "--in", "s.txt", "--secret", "3", "--seed", "1", "--out", "sh.txt"])), 0);
    let out = run(d, &["reconstruct", "--in", "s.txt", "--shares", "sh.txt", "--subset", "3,4"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn audit_k2_is_clean() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["gen", "--k", "2", "--n", "8", "--beta", "0.3", "--seed", "3", "--out", "h.txt"])), 0);
    assert_eq!(code(&run(d, &["build", "--in", "h.txt", "--seed", "4", "--beta", "0.3", "--out", "s.txt"])), 0);
    let out = run(d, &["audit", "--in", "h.txt", "--scheme", "s.txt", "--max-size", "8", "--out", "audit.txt"]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(d.join("audit.txt")).unwrap();
    assert!(text.contains("failures=0\nviolations=0\n"));
    assert!(text.contains("examined=256\n"));
}

#[test]
fn audit_flags_wrong_structure() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("h.txt"), "kuniform 2 5 2\n1 2\n3 4\n").unwrap();
    fs::write(d.join("other.txt"), "kuniform 2 5 1\n1 2\n").unwrap();
    assert_eq!(code(&run(d, &["build", "--in", "h.txt", "--seed", "1", "--out", "s.txt"])), 0);
    let out = run(d, &["audit", "--in", "other.txt", "--scheme", "s.txt"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("violation 3 4\n"));
}

#[test]
fn dense_build_and_report() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["gen", "--k", "2", "--n", "8", "--mode", "dense", "--beta", "0.2", "--seed", "8", "--out", "h.txt"])), 0);
    let args = ["--in", "h.txt", "--mode", "dense", "--beta", "0.2", "--seed", "2"];
    let mut build = vec!["build"];
    build.extend(args);
    build.extend(["--out", "s.txt"]);
    assert_eq!(code(&run(d, &build)), 0);
    let mut report = vec!["report"];
    report.extend(args);
    let out = run(d, &report);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), fs::read_to_string(d.join("s.txt.report")).unwrap());
    assert!(stdout(&out).contains("flag.regime=true"));
    assert_eq!(code(&run(d, &["audit", "--in", "h.txt", "--scheme", "s.txt"])), 0);
}

#[test]
fn partite_input() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let h = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/bipartite.txt")).unwrap();
    fs::write(d.join("p.txt"), h).unwrap();
    assert_eq!(code(&run(d, &["build", "--in", "p.txt", "--seed", "1", "--out", "s.txt"])), 0);
    assert_eq!(code(&run(d, &["audit", "--in", "p.txt", "--scheme", "s.txt", "--max-size", "2"])), 0);
    let report = fs::read_to_string(d.join("s.txt.report")).unwrap();
    assert!(report.contains("total=16\n"));
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.txt"), "kuniform 2 4 1\n1 9\n").unwrap();
    assert_eq!(code(&run(d, &["build", "--in", "bad.txt", "--seed", "1", "--out", "s.txt"])), 2);
    fs::write(d.join("h.txt"), "kuniform 2 6 1\n1 2\n").unwrap();
    assert_eq!(code(&run(d, &["build", "--in", "h.txt", "--seed", "1", "--field", "7", "--out", "s.txt"])), 7);
    assert_eq!(code(&run(d, &["gen", "--k", "2", "--n", "5", "--beta", "0.9", "--seed", "1"])), 9);
    assert_eq!(code(&run(d, &["gen", "--k", "2", "--n", "5"])), 2);
    fs::write(d.join("big.txt"), "kuniform 2 40 1\n1 2\n").unwrap();
    assert_eq!(code(&run(d, &["build", "--in", "big.txt", "--seed", "1", "--out", "s.txt"])), 0);
    assert_eq!(code(&run(d, &["audit", "--in", "big.txt", "--scheme", "s.txt", "--max-size", "40"])), 6);
}
