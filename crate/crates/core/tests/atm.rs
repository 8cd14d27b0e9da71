mod common;

use qtt_core::error::ErrorKind;
use qtt_core::runtime::{run_main, Input, Program};

fn atm() -> Program {
    Program::new(&common::session_with("atm").elab.globals).unwrap()
}

const DISPENSED: &str = "Card inserted\nChecking PIN\nEnter amount:\nDispensing 100\nCard ejected\nShutting down\n";
const REFUSED: &str = "Card inserted\nChecking PIN\nCard ejected\nShutting down\n";

#[test]
fn correct_pin_dispenses() {
    let o = run_main(&atm(), "runATM", Input::script("100\n"), false);
    assert!(o.exit_ok(), "{:?}", o.error);
    assert_eq!(o.stdout, DISPENSED);
    assert_eq!(o.live_refs, 0);
}

#[test]
fn prompted_pin_takes_either_branch() {
    let p = atm();
    let o = run_main(&p, "runATMPrompt", Input::script("1234\n100\n"), false);
    assert_eq!(o.stdout, DISPENSED);
    let o = run_main(&p, "runATMPrompt", Input::script("9999\n"), false);
    assert_eq!(o.stdout, REFUSED);
    assert_eq!(o.live_refs, 0);
}

#[test]
fn shutting_down_with_the_card_inside_is_rejected() {
    let errs = qtt_core::cli::load(&common::corpus_path("reject/atm_no_eject.qtt")).err().unwrap();
    assert_eq!(errs[0].kind, ErrorKind::TypeMismatch);
    assert!(errs[0].message.contains("ATM Ready"), "{}", errs[0]);
}

#[test]
fn dispensing_needs_a_checked_pin() {
    let errs = qtt_core::cli::load(&common::corpus_path("reject/dispense_unchecked.qtt")).err().unwrap();
    assert_eq!(errs[0].kind, ErrorKind::TypeMismatch);
}

#[test]
fn card_evidence_is_found_by_search() {
    let mut s = common::session_with("atm");
    s.load_module("probe", "evidence : {auto prf : HasCard st} -> HasCard st\nevidence = prf\n", None).unwrap();
    assert_eq!(s.normalize("evidence {st=CardInserted}").unwrap(), "HasCardPINNotChecked");
    assert_eq!(s.normalize("evidence {st=Session}").unwrap(), "HasCardPINChecked");
    let err = s.normalize("evidence {st=Ready}").unwrap_err();
    assert_eq!(err.kind, ErrorKind::AutoSearchFailure, "{err}");
}
