//! Every linear binder is used exactly once on every path, and nothing
//! bound at zero survives.

mod common;

use common::usage::{check_corpus, counts};
use qtt_core::erasure::RTerm;
use std::collections::BTreeSet;

#[test]
fn linear_binders_are_used_exactly_once() {
    let (checked, failures) = check_corpus(&common::full_session());
    assert!(failures.is_empty(), "{failures:#?}");
    assert!(checked > 50, "only {checked} binders checked");
}

#[test]
fn counting_sees_duplicates() {
    let dup = RTerm::App(std::rc::Rc::new(RTerm::Var(0)), std::rc::Rc::new(RTerm::Var(0)));
    assert_eq!(counts(&dup, 0), BTreeSet::from([2]));
    let branchy = RTerm::Case(
        std::rc::Rc::new(RTerm::Lit(qtt_core::core::Lit::Int(0))),
        Vec::new(),
        Some(std::rc::Rc::new(RTerm::Var(0))),
    );
    assert_eq!(counts(&branchy, 0), BTreeSet::from([1]));
}
