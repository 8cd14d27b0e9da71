//! Applications: name resolution with overloading, implicit insertion,
//! named implicit arguments, integer literals, auto-implicit search and
//! default implicits.

use super::{Ctx, Elab, MetaKind, Mode, Usage};
use crate::core::*;
use crate::error::{Error, ErrorKind};
use crate::eval::{Closure, Elim, Head, Value};
use crate::multiplicity::Multiplicity;
use crate::syntax::{Arg, Literal, Span, Term as STerm, TermKind};
use std::collections::VecDeque;
use std::rc::Rc;

type R<T> = Result<T, Error>;

const SEARCH_DEPTH: u32 = 8;

/// Outermost shape of a type, used to pick among overloaded names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TyHead {
    Con(GlobalId),
    Type,
    Pi,
}

impl Elab {
    pub(crate) fn elab_app(&mut self, ctx: &mut Ctx, mode: Mode, t: &STerm, expected: Option<&Value>) -> R<(Term, Value, Usage)> {
        let (head, args) = t.spine();
        if let (TermKind::Var(f), [Arg::Explicit(lit)]) = (&head.kind, args.as_slice()) {
            if let TermKind::Lit(Literal::Int(n)) = lit.kind {
                if f == "fromInteger" && ctx.lookup(f).is_none() {
                    return self.int_literal(ctx, n, expected, t.span);
                }
            }
        }
        let h0 = self.holes.len();
        if let TermKind::Var(x) = &head.kind {
            match ctx.lookup(x) {
                Some(level) => {
                    let (ft, fty, fu) = self.infer_local(ctx, mode, level, head.span)?;
                    return self.elab_spine(ctx, mode, ft, fty, fu, h0, &args, expected, t.span);
                }
                None => {
                    let cands = self.lookup_global(x).to_vec();
                    return match cands.as_slice() {
                        [] => Err(self.err(ErrorKind::UnknownName, head.span, format!("{x} is not defined"))),
                        [g] => self.elab_global_app(ctx, mode, *g, &args, expected, t.span),
                        _ => self.elab_overloaded(ctx, mode, &cands, &args, expected, t.span),
                    };
                }
            }
        }
        let (ft, fty, fu) = self.infer(ctx, mode, head)?;
        self.elab_spine(ctx, mode, ft, fty, fu, h0, &args, expected, t.span)
    }

    fn infer_local(&self, ctx: &Ctx, mode: Mode, level: usize, span: Span) -> R<(Term, Value, Usage)> {
        let e = &ctx.entries[level];
        if mode == Mode::Relevant && e.mult == Multiplicity::Zero {
            return Err(self.err(ErrorKind::ErasedUsage, span, format!("{} is not available at run time", e.name)));
        }
        let u = if mode == Mode::Relevant { Usage::single(level) } else { Usage::new() };
        Ok((Term::Var(ctx.len() - 1 - level), e.ty.clone(), u))
    }

    fn elab_global_app(&mut self, ctx: &mut Ctx, mode: Mode, g: GlobalId, args: &[&Arg], expected: Option<&Value>, span: Span) -> R<(Term, Value, Usage)> {
        let h0 = self.holes.len();
        let ty = self.ev().eval(&Default::default(), &self.globals.get(g).ty.clone());
        self.elab_spine(ctx, mode, Term::Global(g), ty, Usage::new(), h0, args, expected, span)
    }

    fn type_head(&self, depth: usize, v: &Value) -> Option<TyHead> {
        let _ = depth;
        match self.ev().whnf(v.clone()) {
            Value::Neutral(Head::Global(g), _) => match self.globals.get(g).kind {
                DefKind::TyCon { .. } => Some(TyHead::Con(g)),
                _ => None,
            },
            Value::Type => Some(TyHead::Type),
            Value::Pi(..) => Some(TyHead::Pi),
            _ => None,
        }
    }

    /// Head of a global's type after all of its arguments.
    fn result_head(&self, g: GlobalId) -> Option<TyHead> {
        let ev = self.ev();
        let mut ty = ev.eval(&Default::default(), &self.globals.get(g).ty);
        let mut depth = 0;
        loop {
            match ev.whnf(ty) {
                Value::Pi(_, _, c) => {
                    ty = ev.apply_closure(&c, Value::var(depth));
                    depth += 1;
                }
                other => return self.type_head(depth, &other),
            }
        }
    }

    fn elab_overloaded(&mut self, ctx: &mut Ctx, mode: Mode, cands: &[GlobalId], args: &[&Arg], expected: Option<&Value>, span: Span) -> R<(Term, Value, Usage)> {
        let want = expected.and_then(|e| self.type_head(ctx.len(), e));
        let mut list: Vec<GlobalId> = match want {
            Some(h) => cands.iter().copied().filter(|g| self.result_head(*g).is_none_or(|r| r == h)).collect(),
            None => cands.to_vec(),
        };
        if list.is_empty() {
            list = cands.to_vec();
        }
        if let [g] = list.as_slice() {
            return self.elab_global_app(ctx, mode, *g, args, expected, span);
        }
        let depth = ctx.len();
        let mut first_err = None;
        for g in list {
            let snap = self.snapshot();
            match self.elab_global_app(ctx, mode, g, args, expected, span) {
                Ok(r) => return Ok(r),
                Err(e) => {
                    self.restore(snap);
                    ctx.truncate(depth);
                    first_err.get_or_insert(e);
                }
            }
        }
        Err(first_err.expect("at least one candidate"))
    }

    fn int_literal(&mut self, ctx: &mut Ctx, n: i64, expected: Option<&Value>, span: Span) -> R<(Term, Value, Usage)> {
        let head = expected.and_then(|e| self.type_head(ctx.len(), e));
        let int = self.builtin_type("Int", span)?;
        match head {
            Some(TyHead::Con(g)) if self.globals.name(g) == "Nat" && n >= 0 => {
                let (z, s) = match (self.globals.find_con("Z"), self.globals.find_con("S")) {
                    (Some(z), Some(s)) => (z, s),
                    _ => return Err(self.err(ErrorKind::UnknownName, span, "Nat constructors are not defined")),
                };
                let t = (0..n).fold(Term::Global(z), |acc, _| Term::app(Term::Global(s), acc, Multiplicity::Omega, Icit::Explicit));
                Ok((t, Value::global(g), Usage::new()))
            }
            Some(TyHead::Con(g)) if self.globals.name(g) != "Int" => {
                let conv = self
                    .lookup_global("fromInteger")
                    .iter()
                    .copied()
                    .find(|f| self.result_head(*f) == Some(TyHead::Con(g)));
                let Some(f) = conv else {
                    let ty = self.show_normal(ctx, expected.unwrap());
                    return Err(self.err(ErrorKind::TypeMismatch, span, format!("cannot use the integer literal {n} at type {ty}")));
                };
                let ev = self.ev();
                let call = Term::app(Term::Global(f), Term::Lit(Lit::Int(n)), Multiplicity::Omega, Icit::Explicit);
                let v = ev.whnf(ev.eval(ctx.env(), &call));
                let t = if ev.is_saturated_con(&v) { ev.normalize(ctx.len(), &v) } else { call };
                Ok((t, Value::global(g), Usage::new()))
            }
            _ => {
                if let Some(e) = expected {
                    self.expect(ctx, e, &int, span)?;
                }
                Ok((Term::Lit(Lit::Int(n)), int, Usage::new()))
            }
        }
    }

    /// Fresh meta for an implicit argument, registered for search or
    /// defaulting according to the binder.
    fn implicit_arg(&mut self, ctx: &Ctx, b: &Binder, dom: &Value, c: &Closure, span: Span) -> (Term, Value) {
        let (t, v) = self.fresh_meta(ctx, span, MetaKind::Plain);
        let kind = match &b.kind {
            BinderKind::Auto => MetaKind::Auto { ctx: ctx.clone(), goal: dom.clone(), applied: v.clone() },
            BinderKind::Default(d) => {
                let value = self.ev().eval(&c.env, d);
                MetaKind::Default { value, applied: v.clone(), depth: ctx.len() }
            }
            _ => MetaKind::Plain,
        };
        let info = self.meta_info.last_mut().unwrap();
        info.kind = kind;
        info.implicit = Some((b.name.clone(), ctx.len(), dom.clone()));
        (t, v)
    }

    /// When the result type cannot depend on the explicit arguments, unify it
    /// with the expected type before checking them, so that the arguments are
    /// checked against fully known types. Returns the metas made for the
    /// implicit arguments, in order.
    fn expected_first(&mut self, ctx: &Ctx, fty: &Value, n_expl: usize, expected: &Value, span: Span) -> VecDeque<(Term, Value)> {
        let snap = self.snapshot();
        let base = ctx.len() + (1 << 30);
        let mut ty = fty.clone();
        let mut made = VecDeque::new();
        let mut seen = 0;
        loop {
            let tyw = self.ev().whnf(ty.clone());
            match &tyw {
                Value::Pi(b, dom, c) if b.kind.icit() == Icit::Implicit => {
                    let m = self.implicit_arg(ctx, b, dom, c, span);
                    ty = self.ev().apply_closure(c, m.1.clone());
                    made.push_back(m);
                }
                Value::Pi(_, _, c) if seen < n_expl => {
                    ty = self.ev().apply_closure(c, Value::var(base + seen));
                    seen += 1;
                }
                _ => {
                    ty = tyw;
                    break;
                }
            }
        }
        if seen < n_expl || self.mentions_from(&ty, base, ctx.len()) || self.unify(ctx.len(), &ty, expected).is_err() {
            self.restore(snap);
            return VecDeque::new();
        }
        made
    }

    /// Whether any variable at level `base` or above occurs in the value.
    fn mentions_from(&self, v: &Value, base: usize, depth: usize) -> bool {
        let ev = self.ev();
        match self.force(v) {
            Value::Neutral(h, sp) => {
                if let Head::Var(l) = h {
                    if l >= base {
                        return true;
                    }
                }
                sp.iter().any(|e| match e {
                    Elim::App(a, _, _) => self.mentions_from(a, base, depth),
                    Elim::Case(c) => c.arms.iter().any(|arm| {
                        let k = arm.names.len();
                        let env = (0..k).fold(c.env.clone(), |e, j| e.push(Value::var(depth + j)));
                        self.mentions_from(&ev.eval(&env, &arm.body), base, depth + k)
                    }),
                })
            }
            Value::Pi(_, a, c) => self.mentions_from(&a, base, depth) || self.mentions_from(&ev.apply_closure(&c, Value::var(depth)), base, depth + 1),
            Value::Lam(_, c) => self.mentions_from(&ev.apply_closure(&c, Value::var(depth)), base, depth + 1),
            Value::Type | Value::World | Value::Lit(_) => false,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn elab_spine(
        &mut self,
        ctx: &mut Ctx,
        mode: Mode,
        mut term: Term,
        fty: Value,
        fu: Usage,
        h0: usize,
        args: &[&Arg],
        expected: Option<&Value>,
        span: Span,
    ) -> R<(Term, Value, Usage)> {
        let infos_before = self.meta_info.len();
        let explicit: Vec<&STerm> = args.iter().filter_map(|a| if let Arg::Explicit(t) = a { Some(t) } else { None }).collect();
        let mut named: Vec<(&String, &STerm)> = args.iter().filter_map(|a| if let Arg::Named(n, t) = a { Some((n, t)) } else { None }).collect();
        let mut premade = match expected {
            Some(e) => self.expected_first(ctx, &fty, explicit.len(), e, span),
            None => VecDeque::new(),
        };
        let mut usage = fu.clone();
        let mut parts: Vec<(std::ops::Range<usize>, Usage)> = vec![(h0..self.holes.len(), fu)];
        let mut next = explicit.into_iter();
        let mut pending = next.next();
        let mut ty = fty;
        loop {
            let tyw = self.ev().whnf(ty.clone());
            match &tyw {
                Value::Pi(b, dom, c) if b.kind.icit() == Icit::Implicit => {
                    let given = named.iter().position(|(n, _)| **n == b.name).map(|i| named.remove(i).1);
                    let (at, av) = match given {
                        Some(e) => {
                            let hs = self.holes.len();
                            let (at, au) = self.check(ctx, mode.arg(b.mult), e, dom)?;
                            let au = au.scale(b.mult);
                            usage.add_assign(&au);
                            parts.push((hs..self.holes.len(), au));
                            let av = self.ev().eval(ctx.env(), &at);
                            if let Some((_, mv)) = premade.pop_front() {
                                self.expect(ctx, &mv, &av, e.span)?;
                            }
                            (at, av)
                        }
                        None => match premade.pop_front() {
                            Some(m) => m,
                            None => {
                                if pending.is_none() && named.is_empty() && expected.is_none() && matches!(b.kind, BinderKind::Implicit) && self.stop_before_implicit(&term) {
                                    break;
                                }
                                self.implicit_arg(ctx, b, dom, c, span)
                            }
                        },
                    };
                    term = Term::app(term, at, b.mult, Icit::Implicit);
                    ty = self.ev().apply_closure(c, av);
                }
                Value::Pi(b, dom, c) => {
                    let Some(e) = pending else {
                        ty = tyw;
                        break;
                    };
                    let hs = self.holes.len();
                    let (at, au) = self.check(ctx, mode.arg(b.mult), e, dom)?;
                    let au = au.scale(b.mult);
                    usage.add_assign(&au);
                    parts.push((hs..self.holes.len(), au));
                    let av = self.ev().eval(ctx.env(), &at);
                    term = Term::app(term, at, b.mult, Icit::Explicit);
                    ty = self.ev().apply_closure(c, av);
                    pending = next.next();
                }
                Value::Neutral(Head::Meta(_), _) if pending.is_some() => {
                    let (at, av) = self.fresh_meta(ctx, span, MetaKind::Plain);
                    let _ = at;
                    let x = ctx.bind("x", Multiplicity::Omega, av.clone(), true);
                    let (bt, _) = self.fresh_meta(ctx, span, MetaKind::Plain);
                    ctx.pop();
                    let _ = x;
                    let pi = Value::Pi(
                        Binder::new("x", Multiplicity::Omega, BinderKind::Explicit),
                        Rc::new(av),
                        Closure { env: ctx.env().clone(), body: Rc::new(bt) },
                    );
                    self.expect(ctx, &tyw, &pi, span)?;
                    ty = pi;
                }
                _ => {
                    if let Some(e) = pending {
                        let f = self.show_term(&ctx.names(), &term);
                        return Err(self.err(ErrorKind::NotAFunction, e.span, format!("{f} is applied to too many arguments")));
                    }
                    ty = tyw;
                    break;
                }
            }
        }
        if let Some((n, e)) = named.first() {
            return Err(self.err(ErrorKind::UnknownName, e.span, format!("there is no implicit argument named {n}")));
        }
        if let Some(e) = expected {
            self.expect(ctx, e, &ty, span)?;
        }
        let refs: Vec<(std::ops::Range<usize>, &Usage)> = parts.iter().map(|(r, u)| (r.clone(), u)).collect();
        self.share_usage(&refs);
        self.settle_implicits(infos_before, span)?;
        Ok((term, ty, usage))
    }

    /// Bare references to variables keep their implicit Pis when inferred,
    /// so `:t` on a name shows its full signature.
    fn stop_before_implicit(&self, term: &Term) -> bool {
        match term {
            Term::Global(g) => !matches!(self.globals.get(*g).kind, DefKind::Con { .. }),
            Term::Var(_) => true,
            _ => false,
        }
    }

    /// Applies defaults and runs constructor search for the implicit
    /// arguments created since `from` that are still unsolved.
    fn settle_implicits(&mut self, from: usize, span: Span) -> R<()> {
        for m in from..self.meta_info.len() {
            if self.metas.solution(m).is_some() {
                continue;
            }
            if let MetaKind::Default { value, applied, depth } = self.meta_info[m].kind.clone() {
                let _ = self.unify(depth, &applied, &value);
            }
        }
        for m in from..self.meta_info.len() {
            if self.metas.solution(m).is_some() {
                continue;
            }
            if let MetaKind::Auto { ctx, goal, applied } = self.meta_info[m].kind.clone() {
                match self.search(&ctx, &goal, SEARCH_DEPTH) {
                    Some(t) => {
                        let v = self.ev().eval(ctx.env(), &t);
                        let _ = self.unify(ctx.len(), &applied, &v);
                    }
                    None => {
                        let g = self.show_normal(&ctx, &goal);
                        return Err(self.err(ErrorKind::AutoSearchFailure, span, format!("can't find an implementation for {g}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Depth-bounded proof search: local variables first, then the goal
    /// type's constructors in declaration order.
    pub(crate) fn search(&mut self, ctx: &Ctx, goal: &Value, fuel: u32) -> Option<Term> {
        if fuel == 0 {
            return None;
        }
        let g = self.ev().whnf(goal.clone());
        for l in (0..ctx.len()).rev() {
            let ty = ctx.entries[l].ty.clone();
            let snap = self.snapshot();
            if self.unify(ctx.len(), &ty, &g).is_ok() {
                return Some(Term::Var(ctx.len() - 1 - l));
            }
            self.restore(snap);
        }
        let (tc, _) = g.as_global_app()?;
        let DefKind::TyCon { cons, .. } = &self.globals.get(tc).kind else { return None };
        for c in cons.clone() {
            let snap = self.snapshot();
            if let Some(t) = self.search_con(ctx, c, &g, fuel) {
                return Some(t);
            }
            self.restore(snap);
        }
        None
    }

    fn search_con(&mut self, ctx: &Ctx, c: GlobalId, goal: &Value, fuel: u32) -> Option<Term> {
        let mut ty = self.ev().eval(&Default::default(), &self.globals.get(c).ty.clone());
        let mut term = Term::Global(c);
        let mut subgoals = Vec::new();
        loop {
            match self.ev().whnf(ty.clone()) {
                Value::Pi(b, dom, cl) => {
                    let (mt, mv) = self.fresh_meta(ctx, Span::default(), MetaKind::Plain);
                    if matches!(b.kind, BinderKind::Explicit | BinderKind::Auto) {
                        subgoals.push(((*dom).clone(), mv.clone()));
                    }
                    term = Term::app(term, mt, b.mult, b.kind.icit());
                    ty = self.ev().apply_closure(&cl, mv);
                }
                other => {
                    ty = other;
                    break;
                }
            }
        }
        self.unify(ctx.len(), &ty, goal).ok()?;
        for (dom, mv) in subgoals {
            let t = self.search(ctx, &dom, fuel - 1)?;
            let v = self.ev().eval(ctx.env(), &t);
            self.unify(ctx.len(), &mv, &v).ok()?;
        }
        Some(term)
    }
}
