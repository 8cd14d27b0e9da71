//! Pattern-matching definitions: clause contexts, constructor patterns and
//! index unification.

use super::{Ctx, Elab, Mode, Usage};
use crate::core::*;
use crate::error::{Error, ErrorKind};
use crate::eval::{Head, Value};
use crate::multiplicity::Multiplicity;
use crate::syntax::{Clause, Literal, Pattern, PatternKind, Span};
use std::rc::Rc;

type R<T> = Result<T, Error>;

impl Elab {
    /// Number of arguments bound by clauses with `n_explicit` patterns:
    /// every binder up to and including the last explicit one.
    fn clause_arity(&self, ty: &Value, n_explicit: usize) -> Option<usize> {
        if n_explicit == 0 {
            return Some(0);
        }
        let ev = self.ev();
        let mut ty = ty.clone();
        let mut seen = 0;
        let mut arity = 0;
        loop {
            match ev.whnf(ty) {
                Value::Pi(b, _, c) => {
                    arity += 1;
                    if b.kind.icit() == Icit::Explicit {
                        seen += 1;
                        if seen == n_explicit {
                            return Some(arity);
                        }
                    }
                    ty = ev.apply_closure(&c, Value::var(arity - 1));
                }
                _ => return None,
            }
        }
    }

    pub(crate) fn elab_clauses(&mut self, name: &str, ty: &Value, clauses: &[Clause]) -> R<(usize, Vec<CoreClause>)> {
        let n = clauses[0].pats.len();
        if let Some(c) = clauses.iter().find(|c| c.pats.len() != n) {
            return Err(self.err(
                ErrorKind::PatternArityMismatch,
                c.span,
                format!("clauses of {name} have different numbers of arguments"),
            ));
        }
        let Some(arity) = self.clause_arity(ty, n) else {
            return Err(self.err(ErrorKind::PatternArityMismatch, clauses[0].span, format!("{name} is given too many arguments")));
        };
        let mut out = Vec::new();
        for c in clauses {
            out.push(self.elab_clause(ty, arity, c)?);
        }
        Ok((arity, out))
    }

    fn elab_clause(&mut self, ty: &Value, arity: usize, clause: &Clause) -> R<CoreClause> {
        let mut ctx = Ctx::new();
        let mut ty = ty.clone();
        let mut explicit = Vec::new();
        let mut pats = clause.pats.iter();
        for level in 0..arity {
            let Value::Pi(b, dom, c) = self.ev().whnf(ty) else { unreachable!("arity was computed from the type") };
            if b.kind.icit() == Icit::Explicit {
                let p = pats.next().expect("one pattern per explicit binder");
                let name = format!("$a{level}");
                ctx.bind(&name, b.mult, (*dom).clone(), true);
                explicit.push((level, p));
            } else {
                let hidden = b.name == "_" || b.name.starts_with('$');
                ctx.bind(&b.name, b.mult, (*dom).clone(), hidden);
            }
            ty = self.ev().apply_closure(&c, Value::var(level));
        }
        let goal = ty;
        let mut split = Vec::new();
        let mut ps: Vec<Pat> = (0..arity).map(Pat::Var).collect();
        for (level, p) in explicit {
            ps[level] = self.bind_pattern(&mut ctx, level, p, &mut split)?;
        }
        let goal = ctx.resubst(&self.ev(), &goal);
        let h0 = self.holes.len();
        let (rt, mut u) = self.check(&mut ctx, Mode::Relevant, &clause.rhs, &goal)?;
        let mut su = Usage::new();
        for l in &split {
            su.add_assign(&Usage::single(*l));
        }
        let h1 = self.holes.len();
        self.share_usage(&[(h0..h1, &u.clone()), (h1..h1, &su)]);
        u.add_assign(&su);
        self.close_scope(&ctx, 0, &mut u, Some(&rt), clause.span)?;
        Ok(CoreClause { pats: ps, depth: ctx.len(), mults: ctx.entries.iter().map(|e| e.mult).collect(), rhs: Rc::new(rt) })
    }

    fn bind_pattern(&mut self, ctx: &mut Ctx, level: usize, p: &Pattern, split: &mut Vec<usize>) -> R<Pat> {
        let ty = ctx.entries[level].ty.clone();
        let p = self.normalize_pattern(p, &ty);
        match &p.kind {
            PatternKind::Var(x) => {
                ctx.entries[level].name = x.clone();
                ctx.entries[level].hidden = false;
                Ok(Pat::Var(level))
            }
            PatternKind::Wildcard => Ok(Pat::Var(level)),
            PatternKind::Lit(l) => {
                self.check_splittable(ctx, level, p.span)?;
                let (lit, tyname) = match l {
                    Literal::Int(n) => (Lit::Int(*n), "Int"),
                    Literal::Str(s) => (Lit::Str(s.clone()), "String"),
                    Literal::Char(c) => (Lit::Char(*c), "Char"),
                };
                let lty = self.builtin_type(tyname, p.span)?;
                self.expect(ctx, &ty, &lty, p.span)?;
                if ctx.is_rigid_var(level) {
                    ctx.refine(&self.ev(), level, Value::Lit(lit.clone()));
                }
                split.push(level);
                Ok(Pat::Lit(level, lit))
            }
            PatternKind::Con(name, subs) => {
                self.check_splittable(ctx, level, p.span)?;
                let base = ctx.len();
                let mult = ctx.entries[level].mult;
                let (c, expl) = self.open_con(ctx, name, subs.len(), &ty, mult, p.span)?;
                for e in &mut ctx.entries[base..] {
                    e.origin = Some(level);
                }
                let cv = self.con_value(ctx, c, base);
                if ctx.is_rigid_var(level) {
                    ctx.refine(&self.ev(), level, cv);
                }
                split.push(level);
                let mut fields: Vec<Pat> = (base..ctx.len()).map(Pat::Var).collect();
                for (sp, fl) in subs.iter().zip(expl) {
                    fields[fl - base] = self.bind_pattern(ctx, fl, sp, split)?;
                }
                Ok(Pat::Con(level, c, fields))
            }
            PatternKind::Tuple(_) => unreachable!("tuples are normalized to constructors"),
        }
    }

    fn check_splittable(&self, ctx: &Ctx, level: usize, span: Span) -> R<()> {
        if ctx.entries[level].mult == Multiplicity::Zero {
            return Err(self.err(ErrorKind::ErasedUsage, span, "cannot match on an argument that is not available at run time"));
        }
        Ok(())
    }

    /// Constructor named `name` for a scrutinee of type `sty`.
    fn resolve_con(&self, name: &str, sty: &Value, span: Span) -> R<GlobalId> {
        let cons: Vec<GlobalId> =
            self.lookup_global(name).iter().copied().filter(|g| matches!(self.globals.get(*g).kind, DefKind::Con { .. })).collect();
        let tycon = self.ev().whnf(sty.clone()).as_global_app().map(|(g, _)| g);
        let of = |g: &GlobalId| match self.globals.get(*g).kind {
            DefKind::Con { tycon, .. } => Some(tycon),
            _ => None,
        };
        if let Some(t) = tycon {
            if let Some(c) = cons.iter().rev().find(|c| of(c) == Some(t)) {
                return Ok(*c);
            }
        }
        match cons.last() {
            Some(c) if tycon.is_none() => Ok(*c),
            Some(c) => {
                let want = self.show_value(&Ctx::new(), &Value::global(tycon.unwrap()));
                let have = self.globals.name(of(c).unwrap()).to_string();
                Err(self.err(ErrorKind::TypeMismatch, span, format!("{name} constructs {have}, not {want}")))
            }
            None => Err(self.err(ErrorKind::UnknownName, span, format!("{name} is not a constructor"))),
        }
    }

    /// Binds the fields of constructor `name` as hidden entries, unifies its
    /// result type with the scrutinee type and returns the levels of the
    /// explicit fields.
    pub(crate) fn open_con(&mut self, ctx: &mut Ctx, name: &str, n_subpats: usize, sty: &Value, smult: Multiplicity, span: Span) -> R<(GlobalId, Vec<usize>)> {
        let sty = ctx.resubst(&self.ev(), sty);
        let c = self.resolve_con(name, &sty, span)?;
        let mut ty = self.ev().eval(&Default::default(), &self.globals.get(c).ty.clone());
        let mut explicit = Vec::new();
        loop {
            match self.ev().whnf(ty.clone()) {
                Value::Pi(b, dom, cl) => {
                    let level = ctx.bind(&b.name, smult.mul(b.mult), (*dom).clone(), true);
                    if b.kind.icit() == Icit::Explicit {
                        explicit.push(level);
                    }
                    ty = self.ev().apply_closure(&cl, Value::var(level));
                }
                other => {
                    ty = other;
                    break;
                }
            }
        }
        if explicit.len() != n_subpats {
            return Err(self.err(
                ErrorKind::PatternArityMismatch,
                span,
                format!("{name} has {} explicit fields but the pattern gives {n_subpats}", explicit.len()),
            ));
        }
        self.unify_indices(ctx, &ty, &sty, span)?;
        Ok((c, explicit))
    }

    /// The constructor applied to the fields bound from `base` on.
    pub(crate) fn con_value(&self, ctx: &Ctx, c: GlobalId, base: usize) -> Value {
        let ev = self.ev();
        let mut ty = ev.eval(&Default::default(), &self.globals.get(c).ty);
        let mut v = Value::global(c);
        let mut level = base;
        while let Value::Pi(b, _, cl) = ev.whnf(ty.clone()) {
            let a = ctx.value(level).clone();
            v = ev.apply(v, a.clone(), b.mult, b.kind.icit());
            ty = ev.apply_closure(&cl, a);
            level += 1;
        }
        v
    }

    fn rigid_level(&self, ctx: &Ctx, v: &Value) -> Option<usize> {
        match v {
            Value::Neutral(Head::Var(l), sp) if sp.is_empty() && *l < ctx.len() && ctx.is_rigid_var(*l) => Some(*l),
            _ => None,
        }
    }

    /// Makes two index values equal by refining pattern variables. Distinct
    /// constructors or literals mean the pattern cannot match.
    fn unify_indices(&mut self, ctx: &mut Ctx, a: &Value, b: &Value, span: Span) -> R<()> {
        let a = self.ev().whnf(ctx.resubst(&self.ev(), a));
        let b = self.ev().whnf(ctx.resubst(&self.ev(), b));
        if self.ev().convertible(ctx.len(), &a, &b) {
            return Ok(());
        }
        let (ra, rb) = (self.rigid_level(ctx, &a), self.rigid_level(ctx, &b));
        let target = match (ra, rb) {
            (Some(x), Some(y)) => {
                let erased = |l: usize| ctx.entries[l].mult == Multiplicity::Zero;
                match (erased(x), erased(y)) {
                    (true, false) => Some((x, b.clone())),
                    (false, true) => Some((y, a.clone())),
                    _ if x > y => Some((x, b.clone())),
                    _ => Some((y, a.clone())),
                }
            }
            (Some(x), None) => Some((x, b.clone())),
            (None, Some(y)) => Some((y, a.clone())),
            (None, None) => None,
        };
        if let Some((l, v)) = target {
            let t = self.ev().quote(ctx.len(), &v);
            if t.mentions(ctx.len() - 1 - l) {
                return Err(self.impossible(ctx, &a, &b, span));
            }
            ctx.refine(&self.ev(), l, v);
            return Ok(());
        }
        let heads = (a.as_global_app().map(|(g, xs)| (g, xs.len())), b.as_global_app().map(|(g, xs)| (g, xs.len())));
        let injective = |g: GlobalId| matches!(self.globals.get(g).kind, DefKind::Con { .. } | DefKind::TyCon { .. });
        match heads {
            (Some((f, n)), Some((g, m))) if injective(f) && injective(g) => {
                if f != g || n != m {
                    return Err(self.impossible(ctx, &a, &b, span));
                }
                let xs: Vec<Value> = a.as_global_app().unwrap().1.into_iter().cloned().collect();
                let ys: Vec<Value> = b.as_global_app().unwrap().1.into_iter().cloned().collect();
                for (x, y) in xs.iter().zip(&ys) {
                    self.unify_indices(ctx, x, y, span)?;
                }
                Ok(())
            }
            (Some((f, _)), None) | (None, Some((f, _))) if injective(f) && (matches!(a, Value::Lit(_)) || matches!(b, Value::Lit(_))) => {
                Err(self.impossible(ctx, &a, &b, span))
            }
            _ => match (&a, &b) {
                (Value::Lit(x), Value::Lit(y)) if x != y => Err(self.impossible(ctx, &a, &b, span)),
                _ => {
                    // Stuck on both sides: nothing to learn, but metas may still be solvable.
                    let _ = self.unify(ctx.len(), &a, &b);
                    Ok(())
                }
            },
        }
    }

    fn impossible(&self, ctx: &Ctx, a: &Value, b: &Value, span: Span) -> Error {
        let (a, b) = (self.show_normal(ctx, a), self.show_normal(ctx, b));
        self.err(ErrorKind::TypeMismatch, span, format!("Mismatch between: {a} and {b}"))
    }
}
