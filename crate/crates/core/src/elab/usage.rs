//! Admissibility checks at binders and syntactic occurrence counting.

use super::{Ctx, Elab, Usage};
use crate::core::Term;
use crate::error::{Error, ErrorKind};
use crate::multiplicity::{admissible, Multiplicity};
use crate::syntax::Span;

/// Occurrences of index `idx` in run-time relevant positions: arguments at
/// Zero positions, types and erased binders' values are skipped. Case
/// alternatives count as the maximum over branches.
pub fn count_relevant(t: &Term, idx: usize) -> usize {
    match t {
        Term::Var(i) => usize::from(*i == idx),
        Term::Global(_) | Term::Meta(..) | Term::Type | Term::World | Term::Lit(_) | Term::Pi(..) => 0,
        Term::Lam(_, b) => count_relevant(b, idx + 1),
        Term::App(f, a, m, _) => {
            count_relevant(f, idx) + if *m == Multiplicity::Zero { 0 } else { count_relevant(a, idx) }
        }
        Term::Let(b, _, v, body) => {
            let v = if b.mult == Multiplicity::Zero { 0 } else { count_relevant(v, idx) };
            v + count_relevant(body, idx + 1)
        }
        Term::Case(s, m, arms, def) => {
            let s = if *m == Multiplicity::Zero { 0 } else { count_relevant(s, idx) };
            let arms = arms.iter().map(|a| count_relevant(&a.body, idx + a.names.len()));
            let def = def.iter().map(|d| count_relevant(d, idx));
            s + arms.chain(def).max().unwrap_or(0)
        }
    }
}

impl Elab {
    /// Checks that the variable at `level` was used as its multiplicity allows.
    /// `body` is the elaborated scope of the variable, over `ctx`.
    pub(crate) fn check_usage(&self, ctx: &Ctx, level: usize, used: Multiplicity, body: Option<&Term>, span: Span) -> Result<(), Error> {
        let e = &ctx.entries[level];
        if admissible(e.mult, used) {
            return Ok(());
        }
        // Definitions with holes are incomplete; their remaining budget shows in the hole reports.
        if body.is_some_and(|b| self.hole_in_scope(b, level, &e.name)) {
            return Ok(());
        }
        match e.mult {
            Multiplicity::Zero => Err(self.err(ErrorKind::ErasedUsage, span, format!("{} is not available at run time", e.name))),
            _ => {
                let n = match used {
                    Multiplicity::Zero => 0,
                    _ => {
                        let counted = body.map_or(2, |b| count_relevant(b, ctx.len() - 1 - level));
                        counted.max(2)
                    }
                };
                Err(self.err(ErrorKind::LinearityError, span, format!("There are {n} uses of linear name {}", e.name)))
            }
        }
    }

    /// Whether a hole in `t` has the variable at `level` in scope.
    fn hole_in_scope(&self, t: &Term, level: usize, name: &str) -> bool {
        let mut gs = Vec::new();
        globals_in(t, &mut gs);
        self.holes.iter().any(|h| {
            gs.contains(&h.gid)
                && h.ctx.entries.get(level).is_some_and(|e| e.name == name)
        })
    }

    /// Checks and removes every variable above `from` from the usage.
    pub(crate) fn close_scope(&self, ctx: &Ctx, from: usize, u: &mut Usage, body: Option<&Term>, span: Span) -> Result<(), Error> {
        for l in from..ctx.len() {
            self.check_usage(ctx, l, u.get(l), body, span)?;
        }
        u.truncate(from);
        Ok(())
    }
}

fn globals_in(t: &Term, out: &mut Vec<crate::core::GlobalId>) {
    match t {
        Term::Global(g) => out.push(*g),
        Term::Var(_) | Term::Meta(..) | Term::Type | Term::World | Term::Lit(_) => {}
        Term::Pi(_, a, b) => {
            globals_in(a, out);
            globals_in(b, out);
        }
        Term::Lam(_, b) => globals_in(b, out),
        Term::App(f, a, ..) => {
            globals_in(f, out);
            globals_in(a, out);
        }
        Term::Let(_, ty, v, b) => {
            globals_in(ty, out);
            globals_in(v, out);
            globals_in(b, out);
        }
        Term::Case(s, _, arms, def) => {
            globals_in(s, out);
            for a in arms {
                globals_in(&a.body, out);
            }
            if let Some(d) = def {
                globals_in(d, out);
            }
        }
    }
}
