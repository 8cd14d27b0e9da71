//! Translation of elaborated definitions to runtime terms. Everything bound
//! at multiplicity zero disappears: binders, arguments and constructor
//! fields.

use crate::core::*;
use crate::error::{Error, ErrorKind};
use crate::eval::{Eval, Metas, Value};
use crate::multiplicity::Multiplicity;
use crate::syntax::Span;
use std::fmt;
use std::rc::Rc;

#[derive(Debug, Clone, PartialEq)]
pub struct RBinder {
    pub name: String,
    /// Multiplicity of the source binder; never zero in erased output.
    pub mult: Multiplicity,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RTerm {
    /// de Bruijn index over runtime binders only.
    Var(usize),
    Global(GlobalId),
    Lam(RBinder, Rc<RTerm>),
    App(Rc<RTerm>, Rc<RTerm>),
    /// Saturated constructor with its runtime fields.
    Con(GlobalId, Vec<RTerm>),
    /// Saturated primitive.
    Prim(GlobalId, Vec<RTerm>),
    Case(Rc<RTerm>, Vec<RArm>, Option<Rc<RTerm>>),
    Let(RBinder, Rc<RTerm>, Rc<RTerm>),
    Lit(Lit),
    /// A type, or anything else without run-time content.
    Erased,
    /// A branch no clause covers.
    Missing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RArm {
    pub pat: ArmPat,
    pub binders: Vec<RBinder>,
    pub body: Rc<RTerm>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeDef {
    pub name: String,
    pub global: GlobalId,
    pub params: Vec<RBinder>,
    pub body: RTerm,
}

type R<T> = Result<T, Error>;

fn leak(msg: String) -> Error {
    Error::new(ErrorKind::ErasureLeak, Span::default(), msg)
}

pub struct Eraser<'a> {
    globals: &'a Globals,
    metas: Metas,
}

impl<'a> Eraser<'a> {
    pub fn new(globals: &'a Globals) -> Eraser<'a> {
        Eraser { globals, metas: Metas::default() }
    }

    fn ev(&self) -> Eval<'_> {
        Eval::new(self.globals, &self.metas)
    }

    /// Multiplicities of the leading Pi binders of a type, looking through
    /// definitions; at most `limit` of them.
    pub fn pi_mults(&self, ty: &Term, limit: usize) -> Vec<Multiplicity> {
        self.pi_binders(ty, limit).into_iter().map(|b| b.mult).collect()
    }

    fn pi_binders(&self, ty: &Term, limit: usize) -> Vec<RBinder> {
        let ev = self.ev();
        let mut v = ev.eval(&Default::default(), ty);
        let mut out = Vec::new();
        while out.len() < limit {
            let Value::Pi(b, _, c) = ev.whnf(v.clone()) else { break };
            v = ev.apply_closure(&c, Value::var(out.len()));
            out.push(RBinder { name: b.name.clone(), mult: b.mult });
        }
        out
    }

    /// Number of parameters the erased form of a global takes.
    pub fn erased_arity(&self, g: GlobalId) -> usize {
        self.pi_mults(&self.globals.get(g).ty, usize::MAX).iter().filter(|m| **m != Multiplicity::Zero).count()
    }

    fn runtime_fields(&self, c: GlobalId) -> Vec<Multiplicity> {
        match &self.globals.get(c).kind {
            DefKind::Con { field_mults, .. } => field_mults.clone(),
            _ => Vec::new(),
        }
    }

    /// Runtime argument count of a primitive.
    pub fn prim_arity(&self, g: GlobalId) -> usize {
        match &self.globals.get(g).kind {
            DefKind::Prim { arity, .. } => self.pi_mults(&self.globals.get(g).ty, *arity).iter().filter(|m| **m != Multiplicity::Zero).count(),
            _ => 0,
        }
    }

    pub fn erase_def(&self, g: GlobalId) -> R<RuntimeDef> {
        let def = self.globals.get(g);
        let DefKind::Fun { arity, tree, .. } = &def.kind else {
            return Err(leak(format!("{} is not a function definition", def.name)));
        };
        let mut levels = Vec::new();
        let mut lmults = Vec::new();
        let mut params = Vec::new();
        for (i, b) in self.pi_binders(&def.ty, *arity).into_iter().enumerate() {
            lmults.push(b.mult);
            if b.mult == Multiplicity::Zero {
                levels.push(None);
            } else {
                levels.push(Some(params.len()));
                let name = if b.name.is_empty() || b.name == "_" || params.iter().any(|p: &RBinder| p.name == b.name) { format!("arg{i}") } else { b.name };
                params.push(RBinder { name, mult: b.mult });
            }
        }
        let body = self.tree(tree, &mut levels, &mut lmults, params.len())?;
        Ok(RuntimeDef { name: def.name.clone(), global: g, params, body })
    }

    fn tree(&self, t: &CaseTree, levels: &mut Vec<Option<usize>>, mults: &mut Vec<Multiplicity>, rdepth: usize) -> R<RTerm> {
        match t {
            CaseTree::Missing => Ok(RTerm::Missing),
            CaseTree::Leaf { bindings, rhs, .. } => {
                let mut ctx: Vec<Option<usize>> = bindings.iter().map(|l| levels[*l]).collect();
                self.term(&mut ctx, rdepth, rhs)
            }
            CaseTree::Test { var, arms, default } => {
                let Some(rl) = levels[*var] else {
                    return Err(leak("a match inspects an erased argument".into()));
                };
                let smult = mults[*var];
                let scrut = RTerm::Var(rdepth - 1 - rl);
                let mut rarms = Vec::new();
                for a in arms {
                    let n = levels.len();
                    let (fms, fnames) = match &a.pat {
                        ArmPat::Con(c) => match &self.globals.get(*c).kind {
                            DefKind::Con { field_mults, field_names, .. } => (field_mults.clone(), field_names.clone()),
                            _ => (Vec::new(), Vec::new()),
                        },
                        ArmPat::Lit(_) => (Vec::new(), Vec::new()),
                    };
                    let mut binders = Vec::new();
                    for j in 0..a.arity {
                        let m = smult.mul(fms.get(j).copied().unwrap_or(Multiplicity::Omega));
                        mults.push(m);
                        if m == Multiplicity::Zero {
                            levels.push(None);
                        } else {
                            levels.push(Some(rdepth + binders.len()));
                            let name = match fnames.get(j) {
                                Some(x) if !x.is_empty() && x != "_" => format!("{x}{}", n + j),
                                _ => format!("f{}", n + j),
                            };
                            binders.push(RBinder { name, mult: m });
                        }
                    }
                    let body = self.tree(&a.tree, levels, mults, rdepth + binders.len())?;
                    levels.truncate(n);
                    mults.truncate(n);
                    rarms.push(RArm { pat: a.pat.clone(), binders, body: Rc::new(body) });
                }
                let default = match default {
                    Some(d) => Some(Rc::new(self.tree(d, levels, mults, rdepth)?)),
                    None => None,
                };
                Ok(RTerm::Case(Rc::new(scrut), rarms, default))
            }
        }
    }

    /// Erases a clause right-hand side. Returns the runtime binders of the
    /// clause context, outermost first, and the body over them.
    pub fn erase_clause(&self, c: &CoreClause) -> R<(Vec<RBinder>, RTerm)> {
        let mut ctx = Vec::new();
        let mut binders = Vec::new();
        for (i, m) in c.mults.iter().enumerate() {
            if *m == Multiplicity::Zero {
                ctx.push(None);
            } else {
                ctx.push(Some(binders.len()));
                binders.push(RBinder { name: format!("v{i}"), mult: *m });
            }
        }
        let body = self.term(&mut ctx, binders.len(), &c.rhs)?;
        Ok((binders, body))
    }

    /// `ctx` maps each core level to its runtime level, if it has one.
    pub fn term(&self, ctx: &mut Vec<Option<usize>>, rdepth: usize, t: &Term) -> R<RTerm> {
        match t {
            Term::Var(i) => {
                let l = ctx.len() - 1 - i;
                match ctx[l] {
                    Some(rl) => Ok(RTerm::Var(rdepth - 1 - rl)),
                    None => Err(leak("an erased variable is used at run time".into())),
                }
            }
            Term::Global(g) => self.head(*g, Vec::new()),
            Term::Meta(m, _) => Err(leak(format!("unsolved metavariable ?{m} at run time"))),
            Term::Type | Term::World | Term::Pi(..) => Ok(RTerm::Erased),
            Term::App(..) => {
                let (h, args) = t.spine();
                let mut rargs = Vec::new();
                for (a, m, _) in args {
                    if m != Multiplicity::Zero {
                        rargs.push(self.term(ctx, rdepth, a)?);
                    }
                }
                match h {
                    Term::Global(g) => self.head(*g, rargs),
                    Term::Type | Term::Pi(..) => Ok(RTerm::Erased),
                    _ => {
                        let f = self.term(ctx, rdepth, h)?;
                        Ok(apply(f, rargs))
                    }
                }
            }
            Term::Lam(b, body) => {
                if b.mult == Multiplicity::Zero {
                    ctx.push(None);
                    let r = self.term(ctx, rdepth, body);
                    ctx.pop();
                    r
                } else {
                    ctx.push(Some(rdepth));
                    let r = self.term(ctx, rdepth + 1, body);
                    ctx.pop();
                    Ok(RTerm::Lam(RBinder { name: b.name.clone(), mult: b.mult }, Rc::new(r?)))
                }
            }
            Term::Let(b, _, v, body) => {
                if b.mult == Multiplicity::Zero {
                    ctx.push(None);
                    let r = self.term(ctx, rdepth, body);
                    ctx.pop();
                    r
                } else {
                    let rv = self.term(ctx, rdepth, v)?;
                    ctx.push(Some(rdepth));
                    let r = self.term(ctx, rdepth + 1, body);
                    ctx.pop();
                    Ok(RTerm::Let(RBinder { name: b.name.clone(), mult: b.mult }, Rc::new(rv), Rc::new(r?)))
                }
            }
            Term::Case(s, m, arms, def) => {
                if *m == Multiplicity::Zero {
                    return Err(leak("a run-time match on an erased value".into()));
                }
                let rs = self.term(ctx, rdepth, s)?;
                let mut rarms = Vec::new();
                for a in arms {
                    let fms = match a.pat {
                        ArmPat::Con(c) => self.runtime_fields(c),
                        ArmPat::Lit(_) => Vec::new(),
                    };
                    let n = ctx.len();
                    let mut binders = Vec::new();
                    for (j, name) in a.names.iter().enumerate() {
                        let fm = m.mul(fms.get(j).copied().unwrap_or(Multiplicity::Omega));
                        if fm == Multiplicity::Zero {
                            ctx.push(None);
                        } else {
                            ctx.push(Some(rdepth + binders.len()));
                            binders.push(RBinder { name: name.clone(), mult: fm });
                        }
                    }
                    let body = self.term(ctx, rdepth + binders.len(), &a.body);
                    ctx.truncate(n);
                    rarms.push(RArm { pat: a.pat.clone(), binders, body: Rc::new(body?) });
                }
                let def = match def {
                    Some(d) => Some(Rc::new(self.term(ctx, rdepth, d)?)),
                    None => None,
                };
                Ok(RTerm::Case(Rc::new(rs), rarms, def))
            }
            Term::Lit(l) => Ok(RTerm::Lit(l.clone())),
        }
    }

    fn head(&self, g: GlobalId, mut args: Vec<RTerm>) -> R<RTerm> {
        match &self.globals.get(g).kind {
            DefKind::TyCon { .. } => Ok(RTerm::Erased),
            DefKind::Con { field_mults, .. } => {
                let k = field_mults.iter().filter(|m| **m != Multiplicity::Zero).count();
                if args.len() >= k {
                    let rest = args.split_off(k);
                    Ok(apply(RTerm::Con(g, args), rest))
                } else {
                    Ok(apply(RTerm::Global(g), args))
                }
            }
            DefKind::Prim { .. } => {
                let k = self.prim_arity(g);
                if args.len() >= k {
                    let rest = args.split_off(k);
                    Ok(apply(RTerm::Prim(g, args), rest))
                } else {
                    Ok(apply(RTerm::Global(g), args))
                }
            }
            _ => Ok(apply(RTerm::Global(g), args)),
        }
    }
}

fn apply(f: RTerm, args: Vec<RTerm>) -> RTerm {
    args.into_iter().fold(f, |f, a| RTerm::App(Rc::new(f), Rc::new(a)))
}

/// Erases every function definition. The first failure is returned.
pub fn erase_all(globals: &Globals) -> R<Vec<RuntimeDef>> {
    let er = Eraser::new(globals);
    let mut out = Vec::new();
    for (g, d) in globals.defs.iter().enumerate() {
        if matches!(d.kind, DefKind::Fun { .. }) {
            out.push(er.erase_def(g).map_err(|e| Error { message: format!("{}: {}", d.name, e.message), ..e })?);
        }
    }
    Ok(out)
}

/// Validates an erased definition against its source: the parameters are
/// exactly the non-zero leading binders, every variable refers to a binder
/// in scope whose multiplicity is not zero, and constructors and primitives
/// carry exactly their run-time fields.
pub fn check_erased(globals: &Globals, def: &RuntimeDef, original: GlobalId) -> bool {
    let er = Eraser::new(globals);
    let src = globals.get(original);
    let DefKind::Fun { arity, .. } = &src.kind else { return false };
    let expected: Vec<Multiplicity> = er.pi_mults(&src.ty, *arity).into_iter().filter(|m| *m != Multiplicity::Zero).collect();
    let got: Vec<Multiplicity> = def.params.iter().map(|b| b.mult).collect();
    if expected != got {
        return false;
    }
    let mut scope: Vec<Multiplicity> = got;
    well_erased(&er, &mut scope, &def.body)
}

fn well_erased(er: &Eraser, scope: &mut Vec<Multiplicity>, t: &RTerm) -> bool {
    match t {
        RTerm::Var(i) => *i < scope.len() && scope[scope.len() - 1 - i] != Multiplicity::Zero,
        RTerm::Global(_) | RTerm::Lit(_) | RTerm::Erased | RTerm::Missing => true,
        RTerm::Lam(b, body) => under(er, scope, std::slice::from_ref(b), body),
        RTerm::App(f, a) => well_erased(er, scope, f) && well_erased(er, scope, a),
        RTerm::Con(c, args) => {
            let k = er.runtime_fields(*c).iter().filter(|m| **m != Multiplicity::Zero).count();
            args.len() == k && args.iter().all(|a| well_erased(er, scope, a))
        }
        RTerm::Prim(p, args) => args.len() == er.prim_arity(*p) && args.iter().all(|a| well_erased(er, scope, a)),
        RTerm::Case(s, arms, def) => {
            well_erased(er, scope, s)
                && arms.iter().all(|a| under(er, scope, &a.binders, &a.body))
                && def.as_ref().is_none_or(|d| well_erased(er, scope, d))
        }
        RTerm::Let(b, v, body) => well_erased(er, scope, v) && under(er, scope, std::slice::from_ref(b), body),
    }
}

fn under(er: &Eraser, scope: &mut Vec<Multiplicity>, bs: &[RBinder], body: &RTerm) -> bool {
    if bs.iter().any(|b| b.mult == Multiplicity::Zero) {
        return false;
    }
    let n = scope.len();
    scope.extend(bs.iter().map(|b| b.mult));
    let ok = well_erased(er, scope, body);
    scope.truncate(n);
    ok
}

/// Printing of runtime terms, for `dump-erased`.
pub struct Show<'a> {
    pub globals: &'a Globals,
    pub term: &'a RTerm,
    pub names: Vec<String>,
}

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = self.names.clone();
        f.write_str(&show(self.globals, &mut names, self.term))
    }
}

fn show(gs: &Globals, names: &mut Vec<String>, t: &RTerm) -> String {
    let atom = |gs: &Globals, names: &mut Vec<String>, t: &RTerm| {
        let s = show(gs, names, t);
        match t {
            RTerm::Var(_) | RTerm::Global(_) | RTerm::Lit(_) | RTerm::Erased | RTerm::Missing => s,
            RTerm::Con(_, a) | RTerm::Prim(_, a) if a.is_empty() => s,
            _ => format!("({s})"),
        }
    };
    match t {
        RTerm::Var(i) => names.get(names.len().wrapping_sub(1 + i)).cloned().unwrap_or_else(|| format!("#{i}")),
        RTerm::Global(g) => gs.name(*g).to_string(),
        RTerm::Lit(l) => crate::pretty::lit(l),
        RTerm::Erased => "_".into(),
        RTerm::Missing => "<missing>".into(),
        RTerm::Lam(b, body) => {
            names.push(b.name.clone());
            let s = format!("\\{} => {}", b.name, show(gs, names, body));
            names.pop();
            s
        }
        RTerm::App(fun, a) => format!("{} {}", show(gs, names, fun), atom(gs, names, a)),
        RTerm::Con(g, args) | RTerm::Prim(g, args) => {
            let mut s = gs.name(*g).to_string();
            for a in args {
                s.push(' ');
                s.push_str(&atom(gs, names, a));
            }
            s
        }
        RTerm::Let(b, v, body) => {
            let v = show(gs, names, v);
            names.push(b.name.clone());
            let s = format!("let {} = {v} in {}", b.name, show(gs, names, body));
            names.pop();
            s
        }
        RTerm::Case(s, arms, def) => {
            let mut alts = Vec::new();
            for a in arms {
                let mut pat = match &a.pat {
                    ArmPat::Con(c) => gs.name(*c).to_string(),
                    ArmPat::Lit(l) => crate::pretty::lit(l),
                };
                for b in &a.binders {
                    pat.push(' ');
                    pat.push_str(&b.name);
                }
                let n = names.len();
                names.extend(a.binders.iter().map(|b| b.name.clone()));
                alts.push(format!("{pat} => {}", show(gs, names, &a.body)));
                names.truncate(n);
            }
            if let Some(d) = def {
                alts.push(format!("_ => {}", show(gs, names, d)));
            }
            format!("case {} of {{ {} }}", show(gs, names, s), alts.join("; "))
        }
    }
}

impl RuntimeDef {
    /// `name p0 p1 = body`.
    pub fn display(&self, globals: &Globals) -> String {
        let names: Vec<String> = self.params.iter().map(|b| b.name.clone()).collect();
        let body = Show { globals, term: &self.body, names: names.clone() }.to_string();
        let mut head = self.name.clone();
        for n in &names {
            head.push(' ');
            head.push_str(n);
        }
        format!("{head} = {body}")
    }
}
