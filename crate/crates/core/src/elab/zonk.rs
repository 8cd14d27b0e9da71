//! Substituting solved metas into elaborated terms.

use super::Elab;
use crate::core::*;
use crate::eval::{Env, Value};
use std::rc::Rc;

impl Elab {
    pub fn zonk(&self, depth: usize, t: &Term) -> Term {
        match t {
            Term::Var(_) | Term::Global(_) | Term::Type | Term::World | Term::Lit(_) => t.clone(),
            Term::Meta(..) | Term::App(..) if self.solved_head(t) => {
                let ev = self.ev();
                let env = Env::from_values((0..depth).map(Value::var));
                let q = ev.quote(depth, &ev.eval(&env, t));
                self.zonk(depth, &q)
            }
            Term::Meta(..) => t.clone(),
            Term::App(f, a, m, i) => Term::app(self.zonk(depth, f), self.zonk(depth, a), *m, *i),
            Term::Pi(b, a, c) => Term::pi(self.zonk_binder(depth, b), self.zonk(depth, a), self.zonk(depth + 1, c)),
            Term::Lam(b, body) => Term::lam(self.zonk_binder(depth, b), self.zonk(depth + 1, body)),
            Term::Let(b, ty, v, body) => Term::Let(
                self.zonk_binder(depth, b),
                Rc::new(self.zonk(depth, ty)),
                Rc::new(self.zonk(depth, v)),
                Rc::new(self.zonk(depth + 1, body)),
            ),
            Term::Case(s, m, arms, def) => Term::Case(
                Rc::new(self.zonk(depth, s)),
                *m,
                arms.iter()
                    .map(|a| Arm { pat: a.pat.clone(), names: a.names.clone(), body: Rc::new(self.zonk(depth + a.names.len(), &a.body)) })
                    .collect(),
                def.as_ref().map(|d| Rc::new(self.zonk(depth, d))),
            ),
        }
    }

    fn solved_head(&self, t: &Term) -> bool {
        let mut h = t;
        while let Term::App(f, ..) = h {
            h = f;
        }
        matches!(h, Term::Meta(m, _) if self.metas.solution(*m).is_some())
    }

    fn zonk_binder(&self, depth: usize, b: &Binder) -> Binder {
        match &b.kind {
            BinderKind::Default(d) => Binder { kind: BinderKind::Default(Rc::new(self.zonk(depth, d))), ..b.clone() },
            _ => b.clone(),
        }
    }
}

/// First meta occurring in a term.
pub fn first_meta(t: &Term) -> Option<MetaId> {
    match t {
        Term::Meta(m, _) => Some(*m),
        Term::Var(_) | Term::Global(_) | Term::Type | Term::World | Term::Lit(_) => None,
        Term::App(f, a, _, _) => first_meta(f).or_else(|| first_meta(a)),
        Term::Pi(b, a, c) => binder_meta(b).or_else(|| first_meta(a)).or_else(|| first_meta(c)),
        Term::Lam(b, body) => binder_meta(b).or_else(|| first_meta(body)),
        Term::Let(b, _, v, body) => binder_meta(b).or_else(|| first_meta(v)).or_else(|| first_meta(body)),
        Term::Case(s, _, arms, def) => first_meta(s)
            .or_else(|| arms.iter().find_map(|a| first_meta(&a.body)))
            .or_else(|| def.as_ref().and_then(|d| first_meta(d))),
    }
}

fn binder_meta(b: &Binder) -> Option<MetaId> {
    match &b.kind {
        BinderKind::Default(d) => first_meta(d),
        _ => None,
    }
}

/// Unsolved metas in order of first occurrence.
pub fn metas_in(t: &Term, out: &mut Vec<MetaId>) {
    match t {
        Term::Meta(m, _) => {
            if !out.contains(m) {
                out.push(*m);
            }
        }
        Term::Var(_) | Term::Global(_) | Term::Type | Term::World | Term::Lit(_) => {}
        Term::App(f, a, _, _) => {
            metas_in(f, out);
            metas_in(a, out);
        }
        Term::Pi(b, a, c) => {
            binder_metas(b, out);
            metas_in(a, out);
            metas_in(c, out);
        }
        Term::Lam(b, body) => {
            binder_metas(b, out);
            metas_in(body, out);
        }
        Term::Let(b, _, v, body) => {
            binder_metas(b, out);
            metas_in(v, out);
            metas_in(body, out);
        }
        Term::Case(s, _, arms, def) => {
            metas_in(s, out);
            for a in arms {
                metas_in(&a.body, out);
            }
            if let Some(d) = def {
                metas_in(d, out);
            }
        }
    }
}

fn binder_metas(b: &Binder, out: &mut Vec<MetaId>) {
    if let BinderKind::Default(d) = &b.kind {
        metas_in(d, out);
    }
}

/// Replaces each listed meta by a variable bound just outside the term: the
/// first listed meta is the outermost.
pub fn abstract_metas(t: &Term, ms: &[MetaId], depth: usize) -> Term {
    let go = |t: &Term, d: usize| abstract_metas(t, ms, d);
    let gb = |b: &Binder, d: usize| match &b.kind {
        BinderKind::Default(x) => Binder { kind: BinderKind::Default(Rc::new(go(x, d))), ..b.clone() },
        _ => b.clone(),
    };
    match t {
        Term::Meta(m, _) => match ms.iter().position(|x| x == m) {
            Some(k) => Term::Var(depth + ms.len() - 1 - k),
            None => t.clone(),
        },
        Term::Var(_) | Term::Global(_) | Term::Type | Term::World | Term::Lit(_) => t.clone(),
        Term::App(f, a, m, i) => Term::app(go(f, depth), go(a, depth), *m, *i),
        Term::Pi(b, a, c) => Term::pi(gb(b, depth), go(a, depth), go(c, depth + 1)),
        Term::Lam(b, body) => Term::lam(gb(b, depth), go(body, depth + 1)),
        Term::Let(b, ty, v, body) => Term::Let(gb(b, depth), Rc::new(go(ty, depth)), Rc::new(go(v, depth)), Rc::new(go(body, depth + 1))),
        Term::Case(s, m, arms, def) => Term::Case(
            Rc::new(go(s, depth)),
            *m,
            arms.iter().map(|a| Arm { pat: a.pat.clone(), names: a.names.clone(), body: Rc::new(go(&a.body, depth + a.names.len())) }).collect(),
            def.as_ref().map(|x| Rc::new(go(x, depth))),
        ),
    }
}
