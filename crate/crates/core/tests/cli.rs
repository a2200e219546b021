mod common;

use std::path::Path;
use std::process::Command;

use common::{fixture_path, fixtures_dir};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn tlsf(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_tlsf")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn fx(name: &str) -> String {
    fixture_path(name).display().to_string()
}

fn trace(name: &str) -> String {
    fixtures_dir().join("traces").join(name).display().to_string()
}

#[test]
fn check_reports_counts() {
    let r = tlsf(&["check", &fx("arbiter")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "ok: 2 inputs, 2 outputs, 2 property entries\n");
    let r = tlsf(&["check", &fx("arbiter"), "-p", "n=4"]);
    assert_eq!(r.stdout, "ok: 4 inputs, 4 outputs, 2 property entries\n");
}

#[test]
fn duplicate_parameters_are_rejected() {
    let r = tlsf(&["check", &fx("arbiter"), "-p", "n=4", "-p", "n=3"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("twice"), "{}", r.stderr);
}

#[test]
fn diagnostics_name_file_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.tlsf");
    std::fs::write(&path, "INFO {\n  TITLE: \"t\"\n  oops\n}\n").unwrap();
    let r = tlsf(&["check", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    let first = r.stderr.lines().next().unwrap();
    assert!(first.starts_with(&format!("{}:3:", path.display())), "{first}");
    assert!(first.contains(": error: "), "{first}");
}

#[test]
fn basic_flag_reads_basic_files() {
    let file = fixtures_dir().join("basic").join("handshake.tlsf");
    let r = tlsf(&["--basic", "check", file.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(tlsf(&["--basic", "check", &fx("arbiter")]).code == 2);
}

#[test]
fn convert_formats() {
    let r = tlsf(&["convert", &fx("arbiter"), "--format", "flat-fin"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().count(), 1);
    assert!(r.stdout.contains("r[0]") && r.stdout.contains(" & "));

    let r = tlsf(&["convert", &fx("arbiter"), "--format", "basic"]);
    assert_eq!(r.code, 0);
    let dir = tempfile::tempdir().unwrap();
    let basic = dir.path().join("flat.tlsf");
    std::fs::write(&basic, &r.stdout).unwrap();
    let again = tlsf(&["--basic", "convert", basic.to_str().unwrap(), "--format", "basic"]);
    assert_eq!(again.stdout, r.stdout);

    let r = tlsf(&["convert", &fx("arbiter"), "--format", "ast"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.trim_start().starts_with('{'));
    assert_eq!(tlsf(&["convert", &fx("arbiter"), "--format", "ast", "--simplify"]).code, 2);

    let r = tlsf(&["convert", &fx("sugar_finite"), "--format", "flat-inf"]);
    assert_eq!(r.code, 2);
}

#[test]
fn strict_to_standard_flag() {
    let r = tlsf(&["convert", &fx("strict_arbiter"), "--format", "basic", "--strict-to-standard"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.lines().any(|l| l.trim() == "SEMANTICS:   Mealy"), "{}", r.stdout);
    assert!(!r.stdout.contains("ASSERT"));
    assert_eq!(tlsf(&["convert", &fx("arbiter"), "--format", "basic", "--strict-to-standard"]).code, 2);
}

#[test]
fn eval_exit_codes() {
    let good = tlsf(&["eval", &fx("copy_mealy"), "--trace", &trace("copy_good.txt")]);
    assert_eq!((good.code, good.stdout.as_str()), (0, "satisfied\n"));
    let bad = tlsf(&["eval", &fx("copy_mealy"), "--trace", &trace("copy_bad.txt")]);
    assert_eq!((bad.code, bad.stdout.as_str()), (1, "violated\n"));
    assert_eq!(tlsf(&["eval", &fx("finite_arbiter"), "--trace", &trace("arbiter_good.txt")]).code, 0);
    assert_eq!(tlsf(&["eval", &fx("finite_arbiter"), "--trace", &trace("arbiter_bad.txt")]).code, 1);
    // Signals outside the specification are rejected.
    let wrong = tlsf(&["eval", &fx("arbiter"), "--trace", &trace("copy_good.txt")]);
    assert_eq!(wrong.code, 2);
}

#[test]
fn solve_exit_codes_and_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("strategy.txt");
    let r = tlsf(&["solve", &fx("copy_mealy"), "--strategy-out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("realizable ("));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("model Mealy"));

    let r = tlsf(&["solve", &fx("copy_moore")]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("unrealizable ("));

    let r = tlsf(&["solve", &fx("sugar_finite"), "--state-cap", "1"]);
    assert_eq!(r.code, 3);
    assert_eq!(r.stdout, "unknown (state cap of 1 exceeded)\n");

    assert_eq!(tlsf(&["solve", &fx("arbiter")]).code, 2);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(tlsf(&[]).code, 2);
    assert_eq!(tlsf(&["bogus"]).code, 2);
    assert_eq!(tlsf(&["check", "-p", "n=x", &fx("arbiter")]).code, 2);
    assert_eq!(tlsf(&["check", Path::new("/no/such/file.tlsf").to_str().unwrap()]).code, 2);
    assert_eq!(tlsf(&["--help"]).code, 0);
    assert_eq!(tlsf(&["--version"]).code, 0);
}
