//! Checking and inference for terms other than applications.

use super::{rc, Ctx, Elab, MetaKind, Mode, Usage};
use crate::core::*;
use crate::error::{Error, ErrorKind};
use crate::eval::{Closure, Value};
use crate::multiplicity::Multiplicity::{self, Omega, One, Zero};
use crate::syntax::{Alt, LetBind, Literal, Pattern, PatternKind, Plicity, Span, Term as STerm, TermKind};
use std::rc::Rc;

type R<T> = Result<T, Error>;

impl Elab {
    pub fn check(&mut self, ctx: &mut Ctx, mode: Mode, t: &STerm, ty: &Value) -> R<(Term, Usage)> {
        let tyw = self.ev().whnf(ty.clone());
        match (&t.kind, &tyw) {
            (TermKind::Lam(pats, body), Value::Pi(b, dom, c)) if b.kind.icit() == Icit::Explicit => {
                self.check_lam(ctx, mode, pats, body, b, dom, c, t.span)
            }
            (_, Value::Pi(b, dom, c)) if b.kind.icit() == Icit::Implicit => {
                let level = ctx.bind(&b.name, b.mult, (**dom).clone(), false);
                let cod = self.ev().apply_closure(c, Value::var(level));
                let r = self.check(ctx, mode, t, &cod);
                let (bt, mut u) = match r {
                    Ok(r) => r,
                    Err(e) => {
                        ctx.pop();
                        return Err(e);
                    }
                };
                let closed = self.finish_scope(ctx, mode, level, &mut u, &bt, t.span);
                ctx.pop();
                closed?;
                Ok((Term::lam(b.clone(), bt), u))
            }
            (TermKind::Let(binds, body), _) => {
                let (t, _, u) = self.elab_let(ctx, mode, binds, body, Some(ty), t.span)?;
                Ok((t, u))
            }
            (TermKind::Case(s, alts), _) => {
                let (t, _, u) = self.elab_case(ctx, mode, s, alts, Some(ty), t.span)?;
                Ok((t, u))
            }
            (TermKind::Hole(name), _) => Ok((self.new_hole(ctx, mode, name, ty.clone(), t.span), Usage::new())),
            (TermKind::Tuple(xs), _) => {
                let tuple = self.tuple_term(xs, matches!(tyw, Value::Type), t.span);
                self.check(ctx, mode, &tuple, ty)
            }
            (TermKind::Wildcard, _) => {
                let (m, _) = self.fresh_meta(ctx, t.span, MetaKind::Plain);
                Ok((m, Usage::new()))
            }
            (TermKind::Var(_) | TermKind::App(..), _) => {
                let (t, _, u) = self.elab_app(ctx, mode, t, Some(ty))?;
                Ok((t, u))
            }
            _ => {
                let (tm, ity, u) = self.infer(ctx, mode, t)?;
                self.expect(ctx, ty, &ity, t.span)?;
                Ok((tm, u))
            }
        }
    }

    pub fn infer(&mut self, ctx: &mut Ctx, mode: Mode, t: &STerm) -> R<(Term, Value, Usage)> {
        match &t.kind {
            TermKind::Var(_) | TermKind::App(..) => self.elab_app(ctx, mode, t, None),
            TermKind::Type => Ok((Term::Type, Value::Type, Usage::new())),
            TermKind::World => Ok((Term::World, Value::Type, Usage::new())),
            TermKind::Pi(b, cod) => {
                let (dom, _) = self.check(ctx, Mode::Erased, &b.ty, &Value::Type)?;
                let domv = self.ev().eval(ctx.env(), &dom);
                let kind = match &b.plicity {
                    Plicity::Explicit => BinderKind::Explicit,
                    Plicity::Implicit => BinderKind::Implicit,
                    Plicity::Auto => BinderKind::Auto,
                    Plicity::Default(d) => {
                        let (dt, _) = self.check(ctx, Mode::Erased, d, &domv)?;
                        BinderKind::Default(rc(dt))
                    }
                };
                let name = b.name.clone().unwrap_or_else(|| "_".to_string());
                let mult = b.mult.unwrap_or(Omega);
                ctx.bind(&name, mult, domv, name == "_");
                let r = self.check(ctx, Mode::Erased, cod, &Value::Type);
                ctx.pop();
                let (codt, _) = r?;
                Ok((Term::pi(Binder { name, mult, kind }, dom, codt), Value::Type, Usage::new()))
            }
            TermKind::Lam(pats, body) => self.infer_lam(ctx, mode, pats, body, t.span),
            TermKind::Let(binds, body) => self.elab_let(ctx, mode, binds, body, None, t.span),
            TermKind::Case(s, alts) => self.elab_case(ctx, mode, s, alts, None, t.span),
            TermKind::Hole(name) => {
                let (_, ty) = self.fresh_meta(ctx, t.span, MetaKind::Plain);
                let h = self.new_hole(ctx, mode, name, ty.clone(), t.span);
                Ok((h, ty, Usage::new()))
            }
            TermKind::Lit(l) => {
                let (lit, tyname) = match l {
                    Literal::Int(n) => (Lit::Int(*n), "Int"),
                    Literal::Str(s) => (Lit::Str(s.clone()), "String"),
                    Literal::Char(c) => (Lit::Char(*c), "Char"),
                };
                let ty = self.builtin_type(tyname, t.span)?;
                Ok((Term::Lit(lit), ty, Usage::new()))
            }
            TermKind::Tuple(xs) => {
                let tuple = self.tuple_term(xs, false, t.span);
                self.infer(ctx, mode, &tuple)
            }
            TermKind::Wildcard => {
                let (_, ty) = self.fresh_meta(ctx, t.span, MetaKind::Plain);
                let (m, _) = self.fresh_meta(ctx, t.span, MetaKind::Plain);
                Ok((m, ty, Usage::new()))
            }
            TermKind::Do(_) | TermKind::List(_) => {
                Err(self.err(ErrorKind::SyntaxError, t.span, "unexpected sugar after desugaring"))
            }
        }
    }

    /// Reports a failed unification of an inferred type against the expected one.
    pub(crate) fn expect(&mut self, ctx: &Ctx, expected: &Value, got: &Value, span: Span) -> R<()> {
        use super::unify::UnifyError;
        match self.unify(ctx.len(), expected, got) {
            Ok(()) => Ok(()),
            Err(e) => {
                let kind = match e {
                    UnifyError::Mismatch => ErrorKind::TypeMismatch,
                    UnifyError::Occurs => ErrorKind::OccursCheck,
                    UnifyError::NonPattern => ErrorKind::NonPatternSpine,
                };
                let msg = format!(
                    "Mismatch between: {} and {}",
                    self.show_normal(ctx, expected),
                    self.show_normal(ctx, got)
                );
                Err(self.err(kind, span, msg))
            }
        }
    }

    pub(crate) fn show_normal(&self, ctx: &Ctx, v: &Value) -> String {
        let t = self.ev().normalize(ctx.len(), v);
        self.show_term(&ctx.names(), &t)
    }

    pub(crate) fn builtin_type(&self, name: &str, span: Span) -> R<Value> {
        match self.tycon_named(name) {
            Some(g) => Ok(Value::global(g)),
            None => Err(self.err(ErrorKind::UnknownName, span, format!("{name} is not defined; the prelude declares it"))),
        }
    }

    /// `(a, b, c)` as nested pairs, `()` as unit; type or value forms.
    pub(crate) fn tuple_term(&self, xs: &[STerm], is_type: bool, span: Span) -> STerm {
        let (pair, unit) = if is_type { ("Pair", "Unit") } else { ("MkPair", "MkUnit") };
        match xs {
            [] => STerm::var(unit, span),
            [x] => x.clone(),
            [x, rest @ ..] => {
                let rest = if rest.len() == 1 { rest[0].clone() } else { self.tuple_term(rest, is_type, span) };
                STerm::apps(STerm::var(pair, span), [x.clone(), rest])
            }
        }
    }

    /// Checks usage of the binder at `level` (the last entry) in relevant mode.
    pub(crate) fn finish_scope(&self, ctx: &Ctx, mode: Mode, level: usize, u: &mut Usage, body: &Term, span: Span) -> R<()> {
        if mode == Mode::Relevant {
            self.close_scope(ctx, level, u, Some(body), span)
        } else {
            u.truncate(level);
            Ok(())
        }
    }

    /// Name for a pattern-bound position; complex patterns get a generated
    /// name and become a `case` on it.
    fn pattern_binder(&mut self, p: &Pattern, body: STerm) -> (String, bool, STerm) {
        match &p.kind {
            PatternKind::Var(x) => (x.clone(), false, body),
            PatternKind::Wildcard => ("_".into(), true, body),
            _ => {
                let n = self.fresh_name("p");
                let span = p.span.to(body.span);
                let case = STerm::new(TermKind::Case(Box::new(STerm::var(&n, p.span)), vec![Alt { pat: p.clone(), body }]), span);
                (n, true, case)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn check_lam(&mut self, ctx: &mut Ctx, mode: Mode, pats: &[Pattern], body: &STerm, b: &Binder, dom: &Rc<Value>, c: &Closure, span: Span) -> R<(Term, Usage)> {
        let (p, rest) = pats.split_first().expect("lambda without binders");
        let inner = if rest.is_empty() { body.clone() } else { STerm::new(TermKind::Lam(rest.to_vec(), Box::new(body.clone())), span) };
        let (name, hidden, inner) = self.pattern_binder(p, inner);
        let level = ctx.bind(&name, b.mult, (**dom).clone(), hidden);
        let cod = self.ev().apply_closure(c, Value::var(level));
        let r = self.check(ctx, mode, &inner, &cod);
        let (bt, mut u) = match r {
            Ok(r) => r,
            Err(e) => {
                ctx.pop();
                return Err(e);
            }
        };
        let closed = self.finish_scope(ctx, mode, level, &mut u, &bt, p.span);
        ctx.pop();
        closed?;
        Ok((Term::lam(Binder { name, mult: b.mult, kind: b.kind.clone() }, bt), u))
    }

    fn infer_lam(&mut self, ctx: &mut Ctx, mode: Mode, pats: &[Pattern], body: &STerm, span: Span) -> R<(Term, Value, Usage)> {
        let (p, rest) = pats.split_first().expect("lambda without binders");
        let inner = if rest.is_empty() { body.clone() } else { STerm::new(TermKind::Lam(rest.to_vec(), Box::new(body.clone())), span) };
        let (name, hidden, inner) = self.pattern_binder(p, inner);
        let (domt, domv) = self.fresh_meta(ctx, span, MetaKind::Plain);
        let level = ctx.bind(&name, Omega, domv, hidden);
        let r = self.infer(ctx, mode, &inner);
        let (bt, bty, mut u) = match r {
            Ok(r) => r,
            Err(e) => {
                ctx.pop();
                return Err(e);
            }
        };
        let closed = self.finish_scope(ctx, mode, level, &mut u, &bt, p.span);
        let codt = self.ev().quote(ctx.len(), &bty);
        ctx.pop();
        closed?;
        let b = Binder::new(&name, Omega, BinderKind::Explicit);
        let ty = Term::pi(b.clone(), domt, codt);
        let tyv = self.ev().eval(ctx.env(), &ty);
        Ok((Term::lam(b, bt), tyv, u))
    }

    /// Multiplicity of a value from its usage: One if it consumes a linear variable.
    pub(crate) fn inferred_mult(&self, ctx: &Ctx, mode: Mode, u: &Usage) -> Multiplicity {
        if mode == Mode::Erased {
            return Zero;
        }
        let linear = u.iter().any(|(l, m)| m != Zero && l < ctx.len() && ctx.entries[l].mult == One);
        if linear {
            One
        } else {
            Omega
        }
    }

    pub(crate) fn elab_let(&mut self, ctx: &mut Ctx, mode: Mode, binds: &[LetBind], body: &STerm, expected: Option<&Value>, span: Span) -> R<(Term, Value, Usage)> {
        let Some((first, rest)) = binds.split_first() else {
            return match expected {
                Some(e) => {
                    let (t, u) = self.check(ctx, mode, body, e)?;
                    Ok((t, e.clone(), u))
                }
                None => self.infer(ctx, mode, body),
            };
        };
        let rest_body = if rest.is_empty() { body.clone() } else { STerm::new(TermKind::Let(rest.to_vec(), Box::new(body.clone())), span) };
        let name = match &first.pat.kind {
            PatternKind::Var(x) => x.clone(),
            PatternKind::Wildcard => "_".to_string(),
            _ => {
                let alt = Alt { pat: first.pat.clone(), body: rest_body };
                return self.elab_case(ctx, mode, &first.value, &[alt], expected, span);
            }
        };
        let h0 = self.holes.len();
        let (vt, vty, vu) = match &first.ty {
            Some(ty) => {
                let (tt, _) = self.check(ctx, Mode::Erased, ty, &Value::Type)?;
                let tv = self.ev().eval(ctx.env(), &tt);
                let (vt, vu) = self.check(ctx, mode, &first.value, &tv)?;
                (vt, tv, vu)
            }
            None => self.infer(ctx, mode, &first.value)?,
        };
        let h1 = self.holes.len();
        let mult = self.inferred_mult(ctx, mode, &vu);
        let vv = self.ev().eval(ctx.env(), &vt);
        let tyt = self.ev().quote(ctx.len(), &vty);
        let level = ctx.define(&name, if mode == Mode::Erased { Omega } else { mult }, vty, vv);
        if name == "_" {
            ctx.entries[level].hidden = true;
        }
        let r = match expected {
            Some(e) => self.check(ctx, mode, &rest_body, e).map(|(t, u)| (t, e.clone(), u)),
            None => self.infer(ctx, mode, &rest_body),
        };
        let (bt, bty, mut bu) = match r {
            Ok(r) => r,
            Err(e) => {
                ctx.pop();
                return Err(e);
            }
        };
        let closed = self.finish_scope(ctx, mode, level, &mut bu, &bt, first.pat.span);
        ctx.pop();
        closed?;
        let h2 = self.holes.len();
        let vu = vu.scale(if mult == Zero { Omega } else { mult });
        self.share_usage(&[(h0..h1, &vu), (h1..h2, &bu)]);
        let total = vu.add(&bu);
        let b = Binder::new(&name, if mode == Mode::Erased { Omega } else { mult }, BinderKind::Explicit);
        Ok((Term::Let(b, rc(tyt), rc(vt), rc(bt)), bty, total))
    }

    pub(crate) fn elab_case(&mut self, ctx: &mut Ctx, mode: Mode, scrut: &STerm, alts: &[Alt], expected: Option<&Value>, span: Span) -> R<(Term, Value, Usage)> {
        let h0 = self.holes.len();
        let (st, sty, su) = self.infer(ctx, mode, scrut)?;
        let h1 = self.holes.len();
        let scrut_level = match st {
            Term::Var(i) => Some(ctx.len() - 1 - i),
            _ => None,
        };
        let smult = match (mode, scrut_level) {
            (Mode::Erased, _) => Zero,
            (_, Some(l)) => ctx.entries[l].mult,
            _ => self.inferred_mult(ctx, mode, &su),
        };
        let rigid = scrut_level.filter(|l| ctx.is_rigid_var(*l));
        let result_ty = match expected {
            Some(e) => e.clone(),
            None => self.fresh_meta(ctx, span, MetaKind::Plain).1,
        };
        let sty = self.ev().whnf(sty);
        let stv = self.ev().eval(ctx.env(), &st);
        let mut arms = Vec::new();
        let mut default = None;
        let mut usages = Vec::new();
        let mut ranges = Vec::new();
        let mut seen = Vec::new();
        for alt in alts {
            let hb = self.holes.len();
            let mut actx = ctx.clone();
            let pat = self.normalize_pattern(&alt.pat, &sty);
            let mut bu = match &pat.kind {
                PatternKind::Var(_) | PatternKind::Wildcard => {
                    if default.is_some() {
                        return Err(self.err(ErrorKind::InvalidPattern, alt.pat.span, "only one catch-all alternative is allowed"));
                    }
                    let exp = actx.resubst(&self.ev(), &result_ty);
                    match &pat.kind {
                        PatternKind::Var(x) => {
                            let tyt = self.ev().quote(actx.len(), &sty);
                            let level = actx.define(x, smult, sty.clone(), stv.clone());
                            let (bt, mut bu) = self.check(&mut actx, mode, &alt.body, &exp)?;
                            self.finish_scope(&actx, mode, level, &mut bu, &bt, alt.pat.span)?;
                            let b = Binder::new(x, smult, BinderKind::Explicit);
                            default = Some(rc(Term::Let(b, rc(tyt), rc(st.clone()), rc(bt))));
                            bu
                        }
                        _ => {
                            let (bt, bu) = self.check(&mut actx, mode, &alt.body, &exp)?;
                            default = Some(rc(bt));
                            bu
                        }
                    }
                }
                PatternKind::Lit(l) => {
                    let (lit, tyname) = match l {
                        Literal::Int(n) => (Lit::Int(*n), "Int"),
                        Literal::Str(s) => (Lit::Str(s.clone()), "String"),
                        Literal::Char(c) => (Lit::Char(*c), "Char"),
                    };
                    let lty = self.builtin_type(tyname, alt.pat.span)?;
                    self.expect(&actx, &sty, &lty, alt.pat.span)?;
                    if let Some(l) = rigid {
                        actx.refine(&self.ev(), l, Value::Lit(lit.clone()));
                    }
                    let exp = actx.resubst(&self.ev(), &result_ty);
                    let (bt, bu) = self.check(&mut actx, mode, &alt.body, &exp)?;
                    arms.push(Arm { pat: ArmPat::Lit(lit), names: Vec::new(), body: rc(bt) });
                    bu
                }
                PatternKind::Con(name, subpats) => {
                    let base = actx.len();
                    let (c, explicit) = self.open_con(&mut actx, name, subpats.len(), &sty, smult, alt.pat.span)?;
                    if seen.contains(&c) {
                        return Err(self.err(ErrorKind::InvalidPattern, alt.pat.span, format!("{name} is matched by more than one alternative")));
                    }
                    seen.push(c);
                    if let Some(l) = rigid {
                        let cv = self.con_value(&actx, c, base);
                        actx.refine(&self.ev(), l, cv);
                    }
                    let mut body = alt.body.clone();
                    for (sp, fl) in subpats.iter().zip(explicit.iter()).rev() {
                        match &sp.kind {
                            PatternKind::Var(x) => {
                                actx.entries[*fl].name = x.clone();
                                actx.entries[*fl].hidden = false;
                            }
                            PatternKind::Wildcard => {}
                            _ => {
                                let n = self.fresh_name("f");
                                actx.entries[*fl].name = n.clone();
                                let bspan = body.span;
                                let inner = vec![Alt { pat: sp.clone(), body }];
                                body = STerm::new(TermKind::Case(Box::new(STerm::var(&n, sp.span)), inner), sp.span.to(bspan));
                            }
                        }
                    }
                    let exp = actx.resubst(&self.ev(), &result_ty);
                    let (bt, mut bu) = self.check(&mut actx, mode, &body, &exp)?;
                    if mode == Mode::Relevant {
                        self.close_scope(&actx, base, &mut bu, Some(&bt), alt.pat.span)?;
                    }
                    let names = actx.entries[base..].iter().map(|e| e.name.clone()).collect();
                    arms.push(Arm { pat: ArmPat::Con(c), names, body: rc(bt) });
                    bu
                }
                PatternKind::Tuple(_) => unreachable!("tuples are normalized to constructors"),
            };
            bu.truncate(ctx.len());
            usages.push(bu);
            ranges.push(hb..self.holes.len());
        }
        let joined = self.join_branches(ctx, mode, &usages, span)?;
        for h in h0..h1 {
            self.holes[h].other.add_assign(&joined);
        }
        for r in &ranges {
            for h in r.clone() {
                self.holes[h].other.add_assign(&su);
            }
        }
        let total = su.add(&joined);
        Ok((Term::Case(rc(st), smult, arms, default), result_ty, total))
    }

    /// Branch usages must agree on every linear variable; the rest join.
    fn join_branches(&self, ctx: &Ctx, mode: Mode, usages: &[Usage], span: Span) -> R<Usage> {
        let mut joined = Usage::new();
        for u in usages {
            joined = joined.join(u);
        }
        if mode == Mode::Relevant && usages.len() > 1 {
            for l in 0..ctx.len() {
                if ctx.entries[l].mult != One {
                    continue;
                }
                let first = usages[0].get(l);
                if let Some(bad) = usages.iter().map(|u| u.get(l)).find(|m| *m != first) {
                    let off = if first == One { bad } else { first };
                    let n = if off == Zero { 0 } else { 2 };
                    return Err(self.err(
                        ErrorKind::LinearityError,
                        span,
                        format!("There are {n} uses of linear name {}", ctx.entries[l].name),
                    ));
                }
            }
        }
        Ok(joined)
    }

    /// Tuple patterns become pair constructors; integer patterns on `Nat`
    /// become `S`/`Z` chains.
    pub(crate) fn normalize_pattern(&self, p: &Pattern, ty: &Value) -> Pattern {
        match &p.kind {
            PatternKind::Tuple(ps) => match ps.as_slice() {
                [] => Pattern::new(PatternKind::Con("MkUnit".into(), vec![]), p.span),
                [x] => x.clone(),
                [x, rest @ ..] => {
                    let rest = if rest.len() == 1 { rest[0].clone() } else { Pattern::new(PatternKind::Tuple(rest.to_vec()), p.span) };
                    Pattern::new(PatternKind::Con("MkPair".into(), vec![x.clone(), rest]), p.span)
                }
            },
            PatternKind::Lit(Literal::Int(n)) if *n >= 0 && self.is_named_type(ty, "Nat") => {
                let mut pat = Pattern::new(PatternKind::Con("Z".into(), vec![]), p.span);
                for _ in 0..*n {
                    pat = Pattern::new(PatternKind::Con("S".into(), vec![pat]), p.span);
                }
                pat
            }
            _ => p.clone(),
        }
    }

    pub(crate) fn is_named_type(&self, ty: &Value, name: &str) -> bool {
        match self.ev().whnf(ty.clone()).as_global_app() {
            Some((g, _)) => self.globals.name(g) == name,
            None => false,
        }
    }
}
