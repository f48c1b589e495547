use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_charkummer"));
    cmd.args(args).env_remove("CHARKUMMER_PRECISION");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("charkummer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["quotient", "--a", "x", "--b", "y"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["quotient", "--a", "0", "--b", "y"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["tjurina", "--poly", "z^2 + x*y +"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["quotient", "--a", "x", "--b", "w"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn quotient_records() {
    let o = run(&["--format", "records", "quotient", "--a", "x", "--b", "y"]);
    let out = stdout(&o);
    assert!(out.contains("value singular_points=3"), "{out}");
    assert!(out
        .lines()
        .filter(|l| l.starts_with("assert "))
        .all(|l| l.contains("status=pass")));
    let nonnormal = stdout(&run(&["quotient", "--a", "x^2", "--b", "y^2"]));
    assert!(nonnormal.contains("NONNORMAL"), "{nonnormal}");
}

#[test]
fn records_are_byte_stable() {
    let args = ["--format", "records", "verify-paper", "--criterion", "10"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<&str> = std::str::from_utf8(&a.stdout)
        .unwrap()
        .lines()
        .filter(|l| l.starts_with("assert "))
        .collect();
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);
}

#[test]
fn corrupted_database_is_reported() {
    let text = include_str!("../data/rdp.txt");
    let bad: String = text
        .lines()
        .map(|l| {
            if l.starts_with("A3 ") {
                l.replacen(" 4 ", " 5 ", 1)
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let path = scratch("bad-rdp.txt", &bad);
    let o = run(&[
        "--format",
        "records",
        "verify-paper",
        "--criterion",
        "3",
        "--rdp-db",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(
        out.lines()
            .any(|l| l.contains("id=rdp.self_check.A3") && l.contains("status=fail")),
        "{out}"
    );
}

#[test]
fn lattice_from_graph_file() {
    let graph = "# star\n\
        curve C1 self=-3\n\
        curve C2 self=-2\n\
        curve C3 self=-2\n\
        curve C4 self=-2\n\
        curve C5 self=-2\n\
        edge C1 C2 mult=1\n\
        edge C2 C3 mult=1\n\
        edge C2 C4 mult=1\n\
        edge C2 C5 mult=1\n";
    let path = scratch("star.cfg", graph);
    let o = run(&["lattice", "fundamental", "--graph", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Z = 1,2,1,1,1  Z^2 = -1"));
}

#[test]
fn precision_from_environment() {
    let bad = run_env(
        &["quotient", "--a", "x", "--b", "y"],
        &[("CHARKUMMER_PRECISION", "abc")],
    );
    assert_eq!(bad.status.code(), Some(2));
    let ok = run_env(
        &["quotient", "--a", "x", "--b", "y"],
        &[("CHARKUMMER_PRECISION", "14")],
    );
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn serre_depth() {
    let o = run(&["serre", "--g", "3", "--n", "2", "--p", "2"]);
    assert!(stdout(&o).contains("depth: 5"));
}
