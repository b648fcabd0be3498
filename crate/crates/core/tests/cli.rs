use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

const INSTANCE_A: &str = "# path 1-2-3\n3\n1 2 2\n2 3 3\n5 1\n1 0\n4 2\n";
const UNIT_PATH: &str = "3\n1 2 1\n2 3 1\n1 0\n1 0\n1 0\n";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_covertree"));
    c.env_remove("COVERTREE_SEED");
    c
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("covertree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_instance_a() {
    let f = temp_file("a.txt", INSTANCE_A);
    let o = run(&["solve", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "total=5 setup=0 penalty=5\n");
    let o = run(&["solve", f.to_str().unwrap(), "--witness"]);
    assert!(stdout(&o).contains("nodes=[1]\n"));
}

#[test]
fn solve_json_and_stdin() {
    let mut child = bin().args(["solve", "-", "--json", "--witness"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(INSTANCE_A.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["total"], 5);
    assert_eq!(doc["nodes"], serde_json::json!([1]));
}

#[test]
fn maxcov_and_medianoid() {
    let a = temp_file("m.txt", INSTANCE_A);
    assert_eq!(stdout(&run(&["maxcov", a.to_str().unwrap()])), "node=1 penalty=5 covered=5\n");
    let p = temp_file("p.txt", UNIT_PATH);
    assert_eq!(stdout(&run(&["medianoid", p.to_str().unwrap(), "--x", "2"])), "node=1 captured=1\n");
    assert_eq!(run(&["medianoid", p.to_str().unwrap(), "--x", ""]).status.code(), Some(2));
    assert_eq!(run(&["medianoid", p.to_str().unwrap(), "--x", "9"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_2() {
    let o = run(&["solve", "/nonexistent/instance.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let bad = temp_file("bad.txt", "3\n1 2 1\n1 2 1\n0 0\n0 0\n0 0\n");
    let o = run(&["solve", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    assert_eq!(run(&["solve"]).status.code(), Some(2));
    let zero = temp_file("zero.txt", "2\n1 2 0\n1 0\n1 0\n");
    assert_eq!(run(&["direct", zero.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn decimal_scale_is_echoed() {
    let f = temp_file("d.txt", "2\n1 2 1.5\n2 0\n1 0.5\n");
    let out = stdout(&run(&["solve", f.to_str().unwrap()]));
    assert!(out.ends_with("scale=1000000\n"), "{out}");
}

#[test]
fn gen_wn_and_structured_round_trip() {
    let o = run(&["gen", "wn", "--xs", "1,3", "--ys", "2,4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("8\n"));
    let f = temp_file("wn.txt", &text);
    assert_eq!(stdout(&run(&["maxcov", f.to_str().unwrap()])).split(' ').nth(1), Some("penalty=2"));

    let s = stdout(&run(&["gen", "random", "--n", "9", "--seed", "4", "--format", "structured"]));
    let f = temp_file("s.json", &s);
    let a = stdout(&run(&["solve", f.to_str().unwrap(), "--format", "structured"]));
    let t = stdout(&run(&["gen", "random", "--n", "9", "--seed", "4"]));
    let g = temp_file("s.txt", &t);
    assert_eq!(a, stdout(&run(&["solve", g.to_str().unwrap()])));
}

#[test]
fn seed_from_environment() {
    let a = stdout(&bin().args(["gen", "random", "--seed", "1"]).env("COVERTREE_SEED", "77").output().unwrap());
    let b = stdout(&run(&["gen", "random", "--seed", "77"]));
    assert_eq!(a, b);
    assert_ne!(a, stdout(&run(&["gen", "random", "--seed", "1"])));
}

#[test]
fn check_exit_codes() {
    assert_eq!(run(&["check", "--trials", "20"]).status.code(), Some(0));
    let o = run(&["check", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("0 trials, 0 failures"));
    let o = run(&["check", "--trials", "60", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
    assert_eq!(run(&["check", "wn", "--trials", "10"]).status.code(), Some(0));
}

#[test]
fn bench_csv() {
    let path = std::env::temp_dir().join(format!("covertree-bench-{}.csv", std::process::id()));
    let o = run(&["bench", "--sizes", "256,512", "--reps", "3", "--seed", "5", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,construction,median_ns,reps,seed");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("256,symmetric,") && lines[1].ends_with(",3,5"));
    assert_eq!(run(&["bench", "--sizes", "1"]).status.code(), Some(2));
}
