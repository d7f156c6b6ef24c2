use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use skewmm::RatMatrix;
use skewmm_cli::MatrixFile;

fn skewmm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewmm"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_matrix(dir: &Path, name: &str, p: u64, m: RatMatrix) {
    MatrixFile::new(p, m).write(&dir.join(name)).unwrap();
}

fn x_power(n: usize, e: usize) -> RatMatrix {
    // phi(x^e) for rational coefficients is the shift by e
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|k| i64::from((k + n - i) % n == e)).collect()).collect();
    let rows: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    RatMatrix::from_ints(&rows)
}

#[test]
fn gen_is_deterministic_and_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let a = skewmm(dir.path(), &["gen", "--p", "7", "--layers", "0,2", "--seed", "4"]);
    let b = skewmm(dir.path(), &["gen", "--p", "7", "--layers", "0,2", "--seed", "4"]);
    let c = skewmm(dir.path(), &["gen", "--p", "7", "--layers", "0,2", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("skewmm-matrix v1 p=7\n"));
    assert_eq!(MatrixFile::parse(&text).unwrap().to_text(), text);
}

#[test]
fn analyze_reports_support() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_matrix(d, "id.mat", 7, RatMatrix::identity(6));
    write_matrix(d, "x3.mat", 7, x_power(6, 3));
    write_matrix(d, "zero.mat", 7, RatMatrix::zeros(6, 6));
    let id = stdout(&skewmm(d, &["analyze", "id.mat"]));
    assert!(id.contains("skew-sparsity: 1\n") && id.contains("support: {0}\n"), "{id}");
    let x3 = stdout(&skewmm(d, &["analyze", "x3.mat"]));
    assert!(x3.contains("skew-sparsity: 1\n") && x3.contains("support: {3}\n"), "{x3}");
    let zero = stdout(&skewmm(d, &["analyze", "zero.mat"]));
    assert!(zero.contains("skew-sparsity: 0\n") && zero.contains("support: {}\n"), "{zero}");
}

#[test]
fn multiply_by_identity() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_matrix(d, "id.mat", 5, RatMatrix::identity(4));
    let gen = skewmm(d, &["gen", "--p", "5", "--seed", "2", "-o", "a.mat"]);
    assert!(gen.status.success());
    let out = skewmm(d, &["mul", "--algo", "det", "--check", "a.mat", "id.mat", "-o", "c.mat"]);
    assert!(out.status.success());
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    // dense times layer zero touches every layer
    assert_eq!(summary["t_used"], 4);
    assert_eq!(summary["check"], true);
    assert_eq!(std::fs::read(d.join("a.mat")).unwrap(), std::fs::read(d.join("c.mat")).unwrap());
}

#[test]
fn verify_round_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_matrix(d, "id.mat", 5, RatMatrix::identity(4));
    let out = skewmm(d, &["verify", "id.mat", "id.mat", "id.mat", "--mu", "0.01"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "rounds: 7\nresult: equal\n");
    write_matrix(d, "x.mat", 5, x_power(4, 1));
    let out = skewmm(d, &["verify", "x.mat", "id.mat", "id.mat", "--mu", "0.01"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).ends_with("result: not equal\n"));
}

#[test]
fn bench_is_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bench", "--p-list", "5,7", "--t-list", "1,2", "--algos", "det,mc", "--seeds", "1..2", "--check"];
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_skewmm"))
            .args(args)
            .env("SKEWMM_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success());
        stdout(&out)
            .lines()
            .map(|l| {
                let mut v: Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("wall_time_ms");
                v
            })
            .collect::<Vec<_>>()
    };
    let one = run("1");
    assert_eq!(one.len(), 16);
    assert!(one.iter().all(|r| r["correct"] == true));
    assert_eq!(one, run("2"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let code = |args: &[&str]| skewmm(d, args).status.code();
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["gen", "--p", "4"]), Some(2));
    assert_eq!(code(&["analyze", "nope.mat"]), Some(5));
    std::fs::write(d.join("bad.mat"), "skewmm-matrix v1 p=3\n1 0\n0 1").unwrap();
    assert_eq!(code(&["analyze", "bad.mat"]), Some(6));
    write_matrix(d, "a.mat", 3, RatMatrix::identity(2));
    assert_eq!(code(&["mul", "--algo", "mc", "a.mat", "a.mat"]), Some(2));
    assert_eq!(code(&["mul", "--algo", "mc", "--nu", "0.1", "a.mat", "a.mat"]), Some(0));
}
