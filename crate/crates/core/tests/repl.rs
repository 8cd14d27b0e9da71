//! Scripted REPL sessions compared byte for byte with files in tests/golden.
//! Set QTT_BLESS=1 to rewrite the expected output after a deliberate change.

mod common;

use qtt_core::cli::{Repl, Step};
use std::path::{Path, PathBuf};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs each line of `<name>.in` against a REPL with `file` loaded.
fn transcript(name: &str, file: Option<PathBuf>) -> String {
    let mut repl = Repl::new();
    let mut out = String::new();
    if let Some(f) = file {
        let r = repl.load(&f);
        assert_eq!(r.code, 0, "{}", r.stderr);
    }
    let input = std::fs::read_to_string(golden_dir().join(format!("{name}.in"))).unwrap();
    for line in input.lines() {
        out.push_str(&format!("qtt> {line}\n"));
        match repl.handle(line) {
            Step::Continue(r) => {
                out.push_str(&r.stdout);
                out.push_str(&r.stderr);
            }
            Step::Quit => break,
        }
    }
    // Paths differ between checkouts.
    out.replace(env!("CARGO_MANIFEST_DIR"), "$CRATE")
}

fn check(name: &str, file: Option<PathBuf>) {
    let got = transcript(name, file);
    let path = golden_dir().join(format!("{name}.out"));
    if std::env::var_os("QTT_BLESS").is_some() {
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(got, want, "{name} transcript differs");
}

#[test]
fn printf_session() {
    check("printf", Some(common::corpus_path("printf.qtt")));
}

#[test]
fn prelude_session() {
    check("prelude", Some(common::fixture_path("id_explicit.qtt")));
}

#[test]
fn utils_session() {
    check("utils", Some(common::corpus_path("utils.qtt")));
}

#[test]
fn printf_holes() {
    check("holes_printf", Some(common::fixture_path("printf_skeleton.qtt")));
}

#[test]
fn dup_holes() {
    check("holes_dup", Some(common::fixture_path("dup_holes.qtt")));
}

#[test]
fn id_explicit_hole() {
    check("holes_id", Some(common::fixture_path("id_explicit.qtt")));
}

#[test]
fn uncompress_hole() {
    check("holes_uncompress", Some(common::fixture_path("uncompress_skeleton.qtt")));
}

#[test]
fn io_bind_hole() {
    check("holes_io_bind", Some(common::fixture_path("io_bind_skeleton.qtt")));
}

#[test]
fn server_holes() {
    check("holes_server", Some(common::fixture_path("server_skeleton.qtt")));
}

#[test]
fn atm_hole() {
    check("holes_atm", Some(common::fixture_path("atm_whatnow.qtt")));
}

#[test]
fn printf_type_is_byte_exact() {
    let mut s = common::session_with("printf");
    assert_eq!(s.type_of("printf (Num (Lit \" \" (Str End)))").unwrap(), "printf (Num (Lit \" \" (Str End))) : Int -> String -> String");
}

#[test]
fn hole_report_lines() {
    let s = qtt_core::cli::load(&common::fixture_path("id_explicit.qtt")).unwrap();
    let r = s.hole("id_explicit_rhs").unwrap();
    let lines: Vec<&str> = r.lines().collect();
    let a = lines.iter().position(|l| l.trim_start() == "0 a : Type").unwrap();
    let x = lines.iter().position(|l| *l == "   x : a").unwrap();
    assert!(a < x);

    let s = qtt_core::cli::load(&common::fixture_path("dup_holes.qtt")).unwrap();
    assert!(s.hole("second_x").unwrap().lines().any(|l| l.trim_start() == "0 x : a"));
    assert!(s.hole("dup_rhs").unwrap().lines().any(|l| l.trim_start() == "1 x : a"));
}

#[test]
fn quit_and_reload() {
    let mut repl = Repl::new();
    assert!(matches!(repl.handle(":q"), Step::Quit));
    let r = repl.load(&common::corpus_path("reject/dup.qtt"));
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("There are 2 uses of linear name x"));
    let r = repl.load(&common::corpus_path("printf.qtt"));
    assert_eq!(r.code, 0);
    let r = repl.load(&common::corpus_path("reject/dup.qtt"));
    assert_eq!(r.code, 1);
    // The failed load leaves the previous module in place.
    let Step::Continue(r) = repl.handle(":t printf") else { panic!() };
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = repl.load(Path::new("/definitely/not/here.qtt"));
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("Io"), "{}", r.stderr);
}
