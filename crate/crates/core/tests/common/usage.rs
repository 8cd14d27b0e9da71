//! Brute-force occurrence counting on erased clauses.

use super::corpus_functions;
use qtt_core::core::{CoreClause, DefKind, Pat, Term};
use qtt_core::erasure::{Eraser, RTerm};
use qtt_core::multiplicity::Multiplicity;
use qtt_core::session::Session;
use std::collections::BTreeSet;

/// Possible occurrence counts of runtime variable `idx` over the paths
/// through `t`, saturated at 2. An empty set means no path completes.
pub fn counts(t: &RTerm, idx: usize) -> BTreeSet<usize> {
    let one = |n: usize| BTreeSet::from([n]);
    let sum = |a: BTreeSet<usize>, b: BTreeSet<usize>| -> BTreeSet<usize> { a.iter().flat_map(|x| b.iter().map(move |y| (x + y).min(2))).collect() };
    match t {
        RTerm::Var(i) => one(usize::from(*i == idx)),
        RTerm::Global(_) | RTerm::Lit(_) | RTerm::Erased => one(0),
        RTerm::Missing => BTreeSet::new(),
        RTerm::Lam(_, b) => counts(b, idx + 1),
        RTerm::App(f, a) => sum(counts(f, idx), counts(a, idx)),
        RTerm::Con(_, xs) | RTerm::Prim(_, xs) => xs.iter().fold(one(0), |acc, x| sum(acc, counts(x, idx))),
        RTerm::Let(_, v, b) => sum(counts(v, idx), counts(b, idx + 1)),
        RTerm::Case(s, arms, def) => {
            let mut alts = BTreeSet::new();
            for a in arms {
                alts.extend(counts(&a.body, idx + a.binders.len()));
            }
            if let Some(d) = def {
                alts.extend(counts(d, idx));
            }
            sum(counts(s, idx), alts)
        }
    }
}

/// Linear binders introduced inside `t` (lambdas, lets, case fields), each
/// checked against its own scope.
fn inner_linear_ok(t: &RTerm, failures: &mut Vec<String>) {
    let check = |name: &str, body: &RTerm, idx: usize, failures: &mut Vec<String>| {
        let c = counts(body, idx);
        if !c.is_empty() && c != BTreeSet::from([1]) {
            failures.push(format!("{name}: {c:?}"));
        }
    };
    match t {
        RTerm::Lam(b, body) => {
            if b.mult == Multiplicity::One {
                check(&b.name, body, 0, failures);
            }
            inner_linear_ok(body, failures);
        }
        RTerm::Let(b, v, body) => {
            if b.mult == Multiplicity::One {
                check(&b.name, body, 0, failures);
            }
            inner_linear_ok(v, failures);
            inner_linear_ok(body, failures);
        }
        RTerm::App(f, a) => {
            inner_linear_ok(f, failures);
            inner_linear_ok(a, failures);
        }
        RTerm::Con(_, xs) | RTerm::Prim(_, xs) => xs.iter().for_each(|x| inner_linear_ok(x, failures)),
        RTerm::Case(s, arms, def) => {
            inner_linear_ok(s, failures);
            for a in arms {
                let n = a.binders.len();
                for (j, b) in a.binders.iter().enumerate() {
                    if b.mult == Multiplicity::One {
                        check(&b.name, &a.body, n - 1 - j, failures);
                    }
                }
                inner_linear_ok(&a.body, failures);
            }
            if let Some(d) = def {
                inner_linear_ok(d, failures);
            }
        }
        _ => {}
    }
}

fn split_levels(p: &Pat, out: &mut Vec<usize>) {
    match p {
        Pat::Var(_) => {}
        Pat::Lit(l, _) => out.push(*l),
        Pat::Con(l, _, fs) => {
            out.push(*l);
            fs.iter().for_each(|f| split_levels(f, out));
        }
    }
}

/// Whether core variable `idx` occurs anywhere a value is computed at run
/// time. Zero arguments, types and zero-let values are skipped.
fn relevant(t: &Term, idx: usize) -> bool {
    match t {
        Term::Var(i) => *i == idx,
        Term::Global(_) | Term::Meta(..) | Term::Type | Term::World | Term::Lit(_) | Term::Pi(..) => false,
        Term::Lam(_, b) => relevant(b, idx + 1),
        Term::App(f, a, m, _) => relevant(f, idx) || (*m != Multiplicity::Zero && relevant(a, idx)),
        Term::Let(b, _, v, body) => (b.mult != Multiplicity::Zero && relevant(v, idx)) || relevant(body, idx + 1),
        Term::Case(s, m, arms, def) => {
            (*m != Multiplicity::Zero && relevant(s, idx))
                || arms.iter().any(|a| relevant(&a.body, idx + a.names.len()))
                || def.as_ref().is_some_and(|d| relevant(d, idx))
        }
    }
}

fn check_clause(er: &Eraser, name: &str, c: &CoreClause, failures: &mut Vec<String>) -> usize {
    let mut split = Vec::new();
    c.pats.iter().for_each(|p| split_levels(p, &mut split));
    let (binders, body) = er.erase_clause(c).unwrap();
    let mut checked = 0;
    let mut r = 0;
    for (l, m) in c.mults.iter().enumerate() {
        match m {
            Multiplicity::Zero => {
                if relevant(&c.rhs, c.depth - 1 - l) {
                    failures.push(format!("{name}: zero variable at level {l} is used"));
                }
                checked += 1;
            }
            Multiplicity::One => {
                let want = if split.contains(&l) { BTreeSet::from([0]) } else { BTreeSet::from([1]) };
                let got = counts(&body, binders.len() - 1 - r);
                if !got.is_empty() && got != want {
                    failures.push(format!("{name}: linear variable at level {l} has counts {got:?}"));
                }
                checked += 1;
                r += 1;
            }
            Multiplicity::Omega => r += 1,
        }
    }
    inner_linear_ok(&body, failures);
    checked
}

/// Checks every clause of every corpus function. Returns the number of
/// binders checked and a description of each violation.
pub fn check_corpus(s: &Session) -> (usize, Vec<String>) {
    let gs = &s.elab.globals;
    let er = Eraser::new(gs);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (g, _) in corpus_functions(gs) {
        let DefKind::Fun { clauses, .. } = &gs.get(g).kind else { unreachable!() };
        for c in clauses {
            checked += check_clause(&er, gs.name(g), c, &mut failures);
        }
    }
    (checked, failures)
}
