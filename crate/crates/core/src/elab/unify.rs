//! Pattern unification. A meta applied to distinct bound variables is solved
//! by abstracting over them; metas in the solution that mention variables
//! outside the spine are pruned. Nothing is postponed.

use super::{Elab, MetaKind};
use crate::core::*;
use crate::eval::{Closure, Elim, Env, Head, Value};
use crate::multiplicity::Multiplicity;
use std::collections::HashMap;
use std::rc::Rc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnifyError {
    Mismatch,
    Occurs,
    NonPattern,
}

type UResult<T = ()> = Result<T, UnifyError>;

/// Partial renaming from the context of the problem to the spine of a meta.
struct Renaming {
    meta: MetaId,
    dom: usize,
    cod: usize,
    map: HashMap<usize, usize>,
}

impl Renaming {
    fn lift(&self) -> Renaming {
        let mut map = self.map.clone();
        map.insert(self.cod, self.dom);
        Renaming { meta: self.meta, dom: self.dom + 1, cod: self.cod + 1, map }
    }
}

impl Elab {
    /// Forces solved metas at the head.
    pub(crate) fn force(&self, v: &Value) -> Value {
        match v {
            Value::Neutral(Head::Meta(m), _) if self.metas.solution(*m).is_some() => self.ev().whnf(v.clone()),
            _ => v.clone(),
        }
    }

    /// One step of global unfolding, if the head can make progress.
    fn unfold(&self, v: &Value) -> Option<Value> {
        self.ev().unfold_global(v)
    }

    pub(crate) fn unify(&mut self, depth: usize, a: &Value, b: &Value) -> UResult {
        let a = self.force(a);
        let b = self.force(b);
        match (&a, &b) {
            (Value::Type, Value::Type) | (Value::World, Value::World) => Ok(()),
            (Value::Lit(x), Value::Lit(y)) if x == y => Ok(()),
            (Value::Pi(b1, d1, c1), Value::Pi(b2, d2, c2)) => {
                if b1.mult != b2.mult || !b1.kind.same_shape(&b2.kind) {
                    return Err(UnifyError::Mismatch);
                }
                self.unify(depth, d1, d2)?;
                let x = Value::var(depth);
                let (r1, r2) = {
                    let ev = self.ev();
                    (ev.apply_closure(c1, x.clone()), ev.apply_closure(c2, x))
                };
                self.unify(depth + 1, &r1, &r2)
            }
            (Value::Lam(_, c1), Value::Lam(_, c2)) => {
                let x = Value::var(depth);
                let (r1, r2) = {
                    let ev = self.ev();
                    (ev.apply_closure(c1, x.clone()), ev.apply_closure(c2, x))
                };
                self.unify(depth + 1, &r1, &r2)
            }
            (Value::Lam(b, c), other) | (other, Value::Lam(b, c)) => {
                let x = Value::var(depth);
                let (r1, r2) = {
                    let ev = self.ev();
                    (ev.apply_closure(c, x.clone()), ev.apply(other.clone(), x, b.mult, b.kind.icit()))
                };
                self.unify(depth + 1, &r1, &r2)
            }
            (Value::Neutral(Head::Meta(m1), s1), Value::Neutral(Head::Meta(m2), s2)) if m1 == m2 => self.unify_spines(depth, s1, s2),
            (Value::Neutral(Head::Meta(m), sp), other) | (other, Value::Neutral(Head::Meta(m), sp)) => self.solve(depth, *m, sp, other),
            (Value::Neutral(Head::Var(x), s1), Value::Neutral(Head::Var(y), s2)) if x == y => self.unify_spines(depth, s1, s2),
            (Value::Neutral(Head::Global(f), s1), Value::Neutral(Head::Global(g), s2)) if f == g => {
                let snap = self.snapshot();
                match self.unify_spines(depth, s1, s2) {
                    Ok(()) => Ok(()),
                    Err(e) => {
                        self.restore(snap);
                        match (self.unfold(&a), self.unfold(&b)) {
                            (None, None) => Err(e),
                            (ua, ub) => self.unify(depth, &ua.unwrap_or(a), &ub.unwrap_or(b)),
                        }
                    }
                }
            }
            _ => match (self.unfold(&a), self.unfold(&b)) {
                (None, None) => Err(UnifyError::Mismatch),
                (ua, ub) => self.unify(depth, &ua.unwrap_or(a), &ub.unwrap_or(b)),
            },
        }
    }

    fn unify_spines(&mut self, depth: usize, s1: &[Elim], s2: &[Elim]) -> UResult {
        if s1.len() != s2.len() {
            return Err(UnifyError::Mismatch);
        }
        for (e1, e2) in s1.iter().zip(s2) {
            match (e1, e2) {
                (Elim::App(a, _, _), Elim::App(b, _, _)) => self.unify(depth, a, b)?,
                (Elim::Case(c1), Elim::Case(c2)) => {
                    if !self.ev().convertible_cases(depth, c1, c2) {
                        return Err(UnifyError::Mismatch);
                    }
                }
                _ => return Err(UnifyError::Mismatch),
            }
        }
        Ok(())
    }

    fn solve(&mut self, depth: usize, m: MetaId, sp: &[Elim], rhs: &Value) -> UResult {
        let mut map = HashMap::new();
        for (i, e) in sp.iter().enumerate() {
            let Elim::App(v, _, _) = e else { return Err(UnifyError::NonPattern) };
            match self.force(v) {
                Value::Neutral(Head::Var(x), s) if s.is_empty() && !map.contains_key(&x) => {
                    map.insert(x, i);
                }
                _ => return Err(UnifyError::NonPattern),
            }
        }
        let ren = Renaming { meta: m, dom: sp.len(), cod: depth, map };
        let body = self.rename(&ren, rhs)?;
        let sol = (0..sp.len()).fold(body, |t, i| Term::lam(Binder::new(&format!("x{}", sp.len() - 1 - i), Multiplicity::Omega, BinderKind::Explicit), t));
        let v = self.ev().eval(&Env::new(), &sol);
        self.metas.solutions[m] = Some((Rc::new(sol), v));
        Ok(())
    }

    fn rename(&mut self, ren: &Renaming, v: &Value) -> UResult<Term> {
        let v = self.force(v);
        match &v {
            Value::Neutral(h, sp) => {
                let mut t = match h {
                    Head::Var(x) => match ren.map.get(x) {
                        Some(i) => Term::Var(ren.dom - 1 - i),
                        None => return self.rename_unfolded(ren, &v),
                    },
                    Head::Global(g) => Term::Global(*g),
                    Head::Meta(m2) => {
                        if *m2 == ren.meta {
                            return Err(UnifyError::Occurs);
                        }
                        if let Some(pruned) = self.prune(ren, *m2, sp)? {
                            return self.rename(ren, &pruned);
                        }
                        Term::Meta(*m2, Vec::new())
                    }
                };
                for e in sp {
                    t = match e {
                        Elim::App(a, m, i) => Term::app(t, self.rename(ren, a)?, *m, *i),
                        Elim::Case(c) => {
                            let mut arms = Vec::new();
                            for arm in c.arms.iter() {
                                let k = arm.names.len();
                                let env = (0..k).fold(c.env.clone(), |e, j| e.push(Value::var(ren.cod + j)));
                                let body = self.ev().eval(&env, &arm.body);
                                let inner = (0..k).fold(Renaming { meta: ren.meta, dom: ren.dom, cod: ren.cod, map: ren.map.clone() }, |r, _| r.lift());
                                arms.push(Arm { pat: arm.pat.clone(), names: arm.names.clone(), body: Rc::new(self.rename(&inner, &body)?) });
                            }
                            let def = match &c.default {
                                Some(d) => {
                                    let dv = self.ev().eval(&c.env, d);
                                    Some(Rc::new(self.rename(ren, &dv)?))
                                }
                                None => None,
                            };
                            Term::Case(Rc::new(t), c.mult, arms, def)
                        }
                    };
                }
                Ok(t)
            }
            Value::Pi(b, a, c) => {
                let b = self.rename_binder(ren, b, c)?;
                let a = self.rename(ren, a)?;
                let body = self.ev().apply_closure(c, Value::var(ren.cod));
                let body = self.rename(&ren.lift(), &body)?;
                Ok(Term::pi(b, a, body))
            }
            Value::Lam(b, c) => {
                let b = self.rename_binder(ren, b, c)?;
                let body = self.ev().apply_closure(c, Value::var(ren.cod));
                Ok(Term::lam(b, self.rename(&ren.lift(), &body)?))
            }
            Value::Type => Ok(Term::Type),
            Value::World => Ok(Term::World),
            Value::Lit(l) => Ok(Term::Lit(l.clone())),
        }
    }

    /// A variable escapes the spine; unfolding may make it disappear.
    fn rename_unfolded(&mut self, ren: &Renaming, v: &Value) -> UResult<Term> {
        match self.ev().unfold_global(v) {
            Some(w) => self.rename(ren, &w),
            None => Err(UnifyError::Mismatch),
        }
    }

    fn rename_binder(&mut self, ren: &Renaming, b: &Binder, c: &Closure) -> UResult<Binder> {
        match &b.kind {
            BinderKind::Default(d) => {
                let dv = self.ev().eval(&c.env, d);
                Ok(Binder { kind: BinderKind::Default(Rc::new(self.rename(ren, &dv)?)), ..b.clone() })
            }
            _ => Ok(b.clone()),
        }
    }

    /// Restricts a meta whose spine mentions variables outside the renaming
    /// to the variables that stay in scope. Returns the pruned value.
    fn prune(&mut self, ren: &Renaming, m: MetaId, sp: &[Elim]) -> UResult<Option<Value>> {
        let mut vars = Vec::new();
        for e in sp {
            match e {
                Elim::App(v, _, _) => match self.force(v) {
                    Value::Neutral(Head::Var(x), s) if s.is_empty() => vars.push(x),
                    _ => return Ok(None),
                },
                Elim::Case(_) => return Ok(None),
            }
        }
        if vars.iter().all(|x| ren.map.contains_key(x)) {
            return Ok(None);
        }
        let n = vars.len();
        let keep: Vec<usize> = (0..n).filter(|i| ren.map.contains_key(&vars[*i])).collect();
        let span = self.meta_info[m].span;
        let m2 = self.metas.solutions.len();
        self.metas.solutions.push(None);
        let implicit = self.meta_info[m].implicit.clone();
        self.meta_info.push(super::MetaInfo { span, kind: MetaKind::Plain, implicit });
        let body = Term::Meta(m2, keep.iter().map(|i| n - 1 - i).collect());
        let sol = (0..n).fold(body, |t, i| Term::lam(Binder::new(&format!("x{}", n - 1 - i), Multiplicity::Omega, BinderKind::Explicit), t));
        let v = self.ev().eval(&Env::new(), &sol);
        self.metas.solutions[m] = Some((Rc::new(sol), v));
        let pruned = self.ev().apply_spine(self.metas.solution(m).unwrap().clone(), sp.to_vec());
        Ok(Some(pruned))
    }
}
