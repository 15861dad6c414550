use std::fs;
use std::process::{Command, Output};

fn laver(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laver"))
        .args(args)
        .output()
        .expect("laver runs")
}

fn stdout(args: &[&str]) -> String {
    let out = laver(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn table_level_two() {
    // brute-forced A'_2
    assert_eq!(stdout(&["table", "-n", "2"]), "2 4 2 4\n3 4 3 4\n4 4 4 4\n1 2 3 4\n");
    assert_eq!(stdout(&["table", "-n", "0"]), "1\n");
    assert_eq!(stdout(&["table", "-n", "2", "--format", "periods"]), "1: 2 4\n2: 3 4\n3: 4\n4: 1 2 3 4\n");
    assert_eq!(stdout(&["table", "-n", "2", "--accel"]), stdout(&["table", "-n", "2"]));
}

#[test]
fn table_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.lavr");
    let p = path.to_str().unwrap();
    let first = stdout(&["table", "-n", "6", "--cache", p]);
    assert!(path.exists());
    let bytes = fs::read(&path).unwrap();
    let second = stdout(&["table", "-n", "6", "--cache", p]);
    assert_eq!(first, second);
    assert_eq!(fs::read(&path).unwrap(), bytes);

    // wrong level in the file is a validation failure
    assert_eq!(laver(&["table", "-n", "5", "--cache", p]).status.code(), Some(4));
    let mut bad = bytes.clone();
    bad[30] ^= 0x10;
    fs::write(&path, bad).unwrap();
    assert_eq!(laver(&["table", "-n", "6", "--cache", p]).status.code(), Some(4));
}

#[test]
fn eval_examples() {
    assert_eq!(stdout(&["eval", "j", "0..3"]), "0 0\n1 1\n2 1\n3 1\n");
    assert_eq!(stdout(&["eval", "(j*j)*j", "2"]), "2 3\n");
    // 1 * (1 * (1 * 1)) = 1 * (1 * 2) = 1 * 12 = 16 in A'_4
    assert_eq!(stdout(&["eval", "j*(j*(j*j))", "4"]), "4 0\n");
    let out = stdout(&["eval", "j*j*j", "0..4", "--crit", "--gammas"]);
    assert!(out.contains("crit 0\n"), "{out}");
    assert!(out.contains("gamma_0 -> 2\n"), "{out}");
}

#[test]
fn eval_parse_error() {
    let out = laver(&["eval", "j*(j"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 4"));
}

#[test]
fn fcn_values() {
    assert_eq!(stdout(&["fcn", "0", "--cap", "8"]), "0\n");
    assert_eq!(stdout(&["fcn", "1", "--cap", "8"]), "1\n");
    assert_eq!(stdout(&["fcn", "2", "--cap", "8"]), "2\n");
    assert_eq!(stdout(&["fcn", "3", "--cap", "8"]), "4\n");
    assert_eq!(stdout(&["fcn", "4", "--cap", "16"]), "ABOVE_CAP\n");
}

#[test]
fn search_reports_indeterminate() {
    assert_eq!(stdout(&["search", "--cap", "10"]), "NOT_FOUND up to 10\n");
    assert_eq!(stdout(&["search", "j*j", "--cap", "10"]), "2\n");
}

#[test]
fn verify_reports() {
    assert_eq!(
        stdout(&["verify", "left-distributivity", "-n", "6"]),
        "PASS left-distributivity bound=6 checked=262144\n"
    );
    let json = stdout(&["verify", "laws11", "-n", "5", "--format", "json", "--jobs", "2"]);
    assert!(json.starts_with(r#"{"suite":"laws11","bound":5,"#), "{json}");
    assert!(json.contains(r#""counterexample":null"#));
    let out = stdout(&["verify", "thm41", "-N", "8"]);
    assert!(out.starts_with("PASS thm41 bound=8"), "{out}");
    assert!(out.contains("bundles="), "{out}");
    assert_eq!(laver(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert!(stdout(&["suites"]).contains("accel-grid"));
}

#[test]
fn bitmap_outputs() {
    assert_eq!(
        stdout(&["bitmap", "-n", "2", "--kind", "period-grid"]),
        "P1\n4 3\n0 0 1 0\n1 1 0 0\n0 0 0 1\n"
    );
    assert_eq!(
        stdout(&["bitmap", "-n", "2", "--rows", "4..4"]),
        "P1\n12 1\n0 0 1 0 1 0 0 1 1 1 0 0\n"
    );
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.pbm"), dir.path().join("b.pbm"));
    for p in [&a, &b] {
        stdout(&["bitmap", "-n", "7", "--format", "raw", "-o", p.to_str().unwrap()]);
    }
    let bytes = fs::read(&a).unwrap();
    assert!(bytes.starts_with(b"P4\n1024 128\n"));
    assert_eq!(bytes, fs::read(&b).unwrap());
}

#[test]
fn usage_errors() {
    assert_eq!(laver(&["table"]).status.code(), Some(2));
    assert_eq!(laver(&["table", "-n", "63"]).status.code(), Some(2));
    assert_eq!(laver(&["table", "-n", "14"]).status.code(), Some(2));
    assert_eq!(laver(&["bitmap", "-n", "2", "--rows", "3..1"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_io_failure() {
    let out = laver(&["bitmap", "-n", "2", "-o", "/nonexistent-dir/x.pbm"]);
    assert_eq!(out.status.code(), Some(4));
}
