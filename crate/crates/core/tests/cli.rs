//! The `qtt` binary end to end.

mod common;

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn qtt(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qtt"))
        .args(args)
        .env("QTT_NO_COLOR", "1")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8(b.to_vec()).unwrap()
}

fn path(rel: &str) -> String {
    common::corpus_path(rel).display().to_string()
}

/// Top-level declarations in a source file: unindented, non-comment lines,
/// with runs of clauses for the same name counted once.
fn count_declarations(src: &str) -> usize {
    let mut count = 0;
    let mut last_clause: Option<String> = None;
    for line in src.lines() {
        if line.is_empty() || line.starts_with(char::is_whitespace) || line.starts_with("--") {
            continue;
        }
        let first = line.split_whitespace().next().unwrap().to_string();
        let is_sig = line.contains(" : ") && !line.contains(" = ");
        if is_sig || line.starts_with("data ") || line.starts_with("%prim") || line.starts_with("import ") {
            if !line.starts_with("import ") {
                count += 1;
            }
            last_clause = None;
        } else if last_clause.as_deref() != Some(first.as_str()) {
            count += 1;
            last_clause = Some(first);
        }
    }
    count
}

#[test]
fn check_reports_declarations() {
    let src = std::fs::read_to_string(common::corpus_path("printf.qtt")).unwrap();
    let n = count_declarations(&src);
    let o = qtt(&["check", &path("printf.qtt")], "");
    assert!(o.status.success());
    let out = text(&o.stdout);
    assert!(out.ends_with(&format!("{n} declarations, 0 holes\n")), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("OK ")).count(), n);
    assert!(out.contains("OK definition printfFmt\n"));
}

#[test]
fn check_is_stable_and_fails_on_errors() {
    for f in ["prelude.qtt", "printf.qtt", "rle.qtt", "atm.qtt", "sessions.qtt", "utils.qtt"] {
        let a = qtt(&["check", &path(f)], "");
        let b = qtt(&["check", &path(f)], "");
        assert!(a.status.success(), "{f}: {}", text(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
    }
    let o = qtt(&["check", &path("reject/dup.qtt")], "");
    assert_eq!(o.status.code(), Some(1));
    let err = text(&o.stderr);
    assert!(err.contains("reject/dup.qtt:2:1: LinearityError: There are 2 uses of linear name x"), "{err}");
    assert!(!err.contains('\x1b'));
    let again = qtt(&["check", &path("reject/dup.qtt")], "");
    assert_eq!(again.stderr, o.stderr);
}

#[test]
fn missing_file_is_an_io_error() {
    let o = qtt(&["check", "/no/such/file.qtt"], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stderr).contains("Io: cannot read /no/such/file.qtt"));
}

#[test]
fn run_session_programs() {
    let o = qtt(&["run", &path("utils.qtt")], "");
    assert!(o.status.success());
    assert_eq!(text(&o.stdout), "5\n");
    let o = qtt(&["run", &path("utils.qtt"), "--entry", "mainReverse"], "");
    assert_eq!(text(&o.stdout), "cba\n");
}

#[test]
fn run_atm_with_scripted_input() {
    let dir = std::env::temp_dir().join(format!("qtt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("atm.in");
    std::fs::write(&input, "1234\n250\n").unwrap();
    let o = qtt(&["run", &path("atm.qtt"), "--entry", "runATMPrompt", "--stdin-file", &input.display().to_string()], "");
    assert!(o.status.success());
    assert_eq!(text(&o.stdout), "Card inserted\nChecking PIN\nEnter amount:\nDispensing 250\nCard ejected\nShutting down\n");
    let o = qtt(&["run", &path("atm.qtt"), "--entry", "runATM"], "40\n");
    assert!(text(&o.stdout).contains("Dispensing 40\n"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn deadlock_exits_nonzero() {
    let f = common::fixture_path("deadlock.qtt").display().to_string();
    let o = qtt(&["run", &f], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stderr).contains("deadlock"));
}

#[test]
fn dump_erased() {
    let o = qtt(&["dump-erased", &path("prelude.qtt"), "length"], "");
    assert_eq!(text(&o.stdout), "length n arg2 = n\n-- parameters: 2, checkErased: true\n");
    let o = qtt(&["dump-erased", &path("prelude.qtt"), "append"], "");
    assert!(text(&o.stdout).ends_with("-- parameters: 2, checkErased: true\n"));
    let o = qtt(&["dump-erased", &path("prelude.qtt"), "Nat"], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn repl_over_stdin() {
    let o = qtt(&["repl", &path("printf.qtt")], ":t printf (Num (Lit \" \" (Str End)))\n:exec nope\n:t Z\n:q\n");
    assert!(o.status.success());
    let out = text(&o.stdout);
    assert!(out.contains("printf (Num (Lit \" \" (Str End))) : Int -> String -> String\n"), "{out}");
    assert!(out.contains("Z : Nat\n"));
    assert!(text(&o.stderr).contains("nope has no run-time definition"));
}
