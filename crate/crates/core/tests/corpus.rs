//! Whole-corpus invariants: elaboration, scoping, determinism, NbE stability
//! and the printer/parser round trip.

mod common;

use qtt_core::core::{BinderKind, DefKind, Term};
use qtt_core::eval::{Env, Eval};
use qtt_core::parser::parse_module;
use qtt_core::session::{corpus_source, Session, CORPUS};
use qtt_core::syntax::print_module;
use std::time::{Duration, Instant};

fn load(name: &str) -> Session {
    let mut s = Session::new();
    if let Err(es) = s.load_module(name, corpus_source(name).unwrap(), None) {
        let msgs: Vec<String> = es.iter().map(|e| e.to_string()).collect();
        panic!("{name} failed:\n{}", msgs.join("\n"));
    }
    s
}

fn metas(t: &Term, out: &mut Vec<usize>) {
    match t {
        Term::Meta(m, _) => out.push(*m),
        Term::Var(_) | Term::Global(_) | Term::Type | Term::World | Term::Lit(_) => {}
        Term::Pi(b, a, c) => {
            if let BinderKind::Default(d) = &b.kind {
                metas(d, out);
            }
            metas(a, out);
            metas(c, out);
        }
        Term::Lam(_, body) => metas(body, out),
        Term::App(f, a, _, _) => {
            metas(f, out);
            metas(a, out);
        }
        Term::Let(_, ty, v, body) => {
            metas(ty, out);
            metas(v, out);
            metas(body, out);
        }
        Term::Case(s, _, arms, def) => {
            metas(s, out);
            arms.iter().for_each(|a| metas(&a.body, out));
            if let Some(d) = def {
                metas(d, out);
            }
        }
    }
}

#[test]
fn every_corpus_module_elaborates_quickly() {
    let start = Instant::now();
    for (name, _) in CORPUS {
        load(name);
    }
    assert!(start.elapsed() < Duration::from_secs(10), "took {:?}", start.elapsed());
}

#[test]
fn no_metavariable_is_left_unsolved() {
    let s = common::full_session();
    for d in &s.elab.globals.defs {
        let mut ms = Vec::new();
        metas(&d.ty, &mut ms);
        if let DefKind::Fun { clauses, .. } = &d.kind {
            clauses.iter().for_each(|c| metas(&c.rhs, &mut ms));
        }
        for m in ms {
            assert!(s.elab.metas.solution(m).is_some(), "{} mentions unsolved ?{m}", d.name);
        }
    }
}

#[test]
fn stored_terms_are_well_scoped() {
    let s = common::full_session();
    for d in &s.elab.globals.defs {
        assert!(d.ty.well_scoped(0), "type of {}", d.name);
        if let DefKind::Fun { clauses, .. } = &d.kind {
            for c in clauses {
                assert!(c.rhs.well_scoped(c.depth), "clause of {}", d.name);
                assert_eq!(c.mults.len(), c.depth);
            }
        }
    }
}

#[test]
fn elaboration_is_deterministic() {
    let a = common::full_session();
    let b = common::full_session();
    assert_eq!(a.elab.globals.defs, b.elab.globals.defs);
}

#[test]
fn quoting_is_idempotent() {
    let s = common::full_session();
    let ev = Eval::new(&s.elab.globals, &s.elab.metas);
    for d in &s.elab.globals.defs {
        let once = ev.quote(0, &ev.eval(&Env::new(), &d.ty));
        let twice = ev.quote(0, &ev.eval(&Env::new(), &once));
        assert_eq!(once, twice, "{}", d.name);
    }
}

#[test]
fn printed_modules_parse_back() {
    for (name, src) in CORPUS {
        let m = parse_module(src, name).unwrap();
        let printed = print_module(&m);
        let back = parse_module(&printed, name).unwrap_or_else(|e| panic!("{name}: {e}\n{printed}"));
        assert_eq!(back, m, "{name}");
        assert_eq!(print_module(&back), printed);
    }
}
