//! Every file in corpus/reject fails to elaborate with the kind (and, when
//! given, the message) in its `.expected` file.

mod common;

use qtt_core::cli::load;
use qtt_core::error::ErrorKind;

#[test]
fn reject_corpus() {
    let dir = common::corpus_path("reject");
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|e| e == "qtt")).collect();
    files.sort();
    assert_eq!(files.len(), 6);
    for f in files {
        let expected = std::fs::read_to_string(f.with_extension("expected")).unwrap();
        let mut lines = expected.lines();
        let kind: ErrorKind = lines.next().unwrap().parse().unwrap();
        let message = lines.next().filter(|l| !l.is_empty());
        let errs = match load(&f) {
            Ok(_) => panic!("{} was accepted", f.display()),
            Err(es) => es,
        };
        assert_eq!(errs[0].kind, kind, "{}: {}", f.display(), errs[0]);
        if let Some(m) = message {
            assert!(errs[0].message.contains(m), "{}: {}", f.display(), errs[0]);
        }
    }
}

#[test]
fn dup_message_is_exact() {
    let errs = load(&common::corpus_path("reject/dup.qtt")).err().unwrap();
    assert_eq!(errs[0].message, "There are 2 uses of linear name x");
}

#[test]
fn rejection_keeps_earlier_state_out() {
    let mut s = qtt_core::session::Session::new();
    let before = s.elab.globals.defs.len();
    assert!(s.load_module("bad", "f : (1 x : Int) -> (Int, Int)\nf x = (x, x)\n", None).is_err());
    assert_eq!(s.elab.globals.defs.len(), before);
    assert!(s.type_of("f").is_err());
}
