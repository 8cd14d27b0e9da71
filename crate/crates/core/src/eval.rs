//! Normalization by evaluation. Terms use de Bruijn indices, values use
//! levels. Global definitions stay folded until `whnf` needs to see through
//! them, which keeps types like `Server Utils` readable and lets unification
//! compare spines before unfolding.

use crate::core::*;
use crate::multiplicity::Multiplicity;
use crate::prims::{self, PrimResult};
use std::rc::Rc;

#[derive(Debug, Clone, PartialEq)]
pub enum Head {
    Var(usize),
    Global(GlobalId),
    Meta(MetaId),
}

#[derive(Debug, Clone)]
pub enum Elim {
    App(Value, Multiplicity, Icit),
    Case(CaseClosure),
}

#[derive(Debug, Clone)]
pub struct CaseClosure {
    pub env: Env,
    pub mult: Multiplicity,
    pub arms: Rc<Vec<Arm>>,
    pub default: Option<Rc<Term>>,
}

#[derive(Debug, Clone)]
pub struct Closure {
    pub env: Env,
    pub body: Rc<Term>,
}

#[derive(Debug, Clone)]
pub enum Value {
    Neutral(Head, Vec<Elim>),
    /// The binder's default value, if any, is scoped by the closure's environment.
    Pi(Binder, Rc<Value>, Closure),
    Lam(Binder, Closure),
    Type,
    World,
    Lit(Lit),
}

impl Value {
    pub fn var(level: usize) -> Value {
        Value::Neutral(Head::Var(level), Vec::new())
    }

    pub fn global(id: GlobalId) -> Value {
        Value::Neutral(Head::Global(id), Vec::new())
    }

    /// Global head and argument values, when the spine holds only applications.
    pub fn as_global_app(&self) -> Option<(GlobalId, Vec<&Value>)> {
        match self {
            Value::Neutral(Head::Global(g), sp) => {
                let mut args = Vec::new();
                for e in sp {
                    match e {
                        Elim::App(v, _, _) => args.push(v),
                        Elim::Case(_) => return None,
                    }
                }
                Some((*g, args))
            }
            _ => None,
        }
    }
}

/// Persistent environment; index 0 is the most recent entry.
#[derive(Debug, Clone, Default)]
pub struct Env(Option<Rc<EnvNode>>);

#[derive(Debug)]
pub struct EnvNode {
    value: Value,
    next: Env,
    len: usize,
}

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn push(&self, value: Value) -> Env {
        Env(Some(Rc::new(EnvNode { value, next: self.clone(), len: self.len() + 1 })))
    }

    pub fn get(&self, index: usize) -> &Value {
        let mut node = self.0.as_ref().expect("index out of scope");
        for _ in 0..index {
            node = node.next.0.as_ref().expect("index out of scope");
        }
        &node.value
    }

    pub fn from_values(values: impl IntoIterator<Item = Value>) -> Env {
        values.into_iter().fold(Env::new(), |e, v| e.push(v))
    }

    /// Values in level order (oldest first).
    pub fn to_vec(&self) -> Vec<Value> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = &self.0;
        while let Some(n) = cur {
            out.push(n.value.clone());
            cur = &n.next.0;
        }
        out.reverse();
        out
    }
}

/// Solutions of metavariables, shared read-only with the evaluator.
#[derive(Debug, Clone, Default)]
pub struct Metas {
    pub solutions: Vec<Option<(Rc<Term>, Value)>>,
}

impl Metas {
    pub fn solution(&self, m: MetaId) -> Option<&Value> {
        self.solutions.get(m).and_then(|s| s.as_ref()).map(|(_, v)| v)
    }
}

#[derive(Clone, Copy)]
pub struct Eval<'a> {
    pub globals: &'a Globals,
    pub metas: &'a Metas,
}

impl<'a> Eval<'a> {
    pub fn new(globals: &'a Globals, metas: &'a Metas) -> Eval<'a> {
        Eval { globals, metas }
    }

    pub fn eval(&self, env: &Env, t: &Term) -> Value {
        match t {
            Term::Var(i) => env.get(*i).clone(),
            Term::Global(g) => Value::global(*g),
            Term::Meta(m, xs) => {
                let sp = xs.iter().map(|i| Elim::App(env.get(*i).clone(), Multiplicity::Zero, Icit::Explicit)).collect();
                match self.metas.solution(*m) {
                    Some(sol) => self.apply_spine(sol.clone(), sp),
                    None => Value::Neutral(Head::Meta(*m), sp),
                }
            }
            Term::Type => Value::Type,
            Term::World => Value::World,
            Term::Lit(l) => Value::Lit(l.clone()),
            Term::Pi(b, a, c) => Value::Pi(b.clone(), Rc::new(self.eval(env, a)), Closure { env: env.clone(), body: c.clone() }),
            Term::Lam(b, body) => Value::Lam(b.clone(), Closure { env: env.clone(), body: body.clone() }),
            Term::App(f, a, m, i) => {
                let f = self.eval(env, f);
                let a = self.eval(env, a);
                self.apply(f, a, *m, *i)
            }
            Term::Let(_, _, v, body) => {
                let v = self.eval(env, v);
                self.eval(&env.push(v), body)
            }
            Term::Case(s, m, arms, def) => {
                let s = self.eval(env, s);
                let c = CaseClosure { env: env.clone(), mult: *m, arms: Rc::new(arms.clone()), default: def.clone() };
                self.case_on(s, c)
            }
        }
    }

    pub fn apply_closure(&self, c: &Closure, v: Value) -> Value {
        self.eval(&c.env.push(v), &c.body)
    }

    pub fn apply(&self, f: Value, a: Value, m: Multiplicity, icit: Icit) -> Value {
        match f {
            Value::Lam(_, c) => self.apply_closure(&c, a),
            Value::Neutral(h, mut sp) => {
                sp.push(Elim::App(a, m, icit));
                Value::Neutral(h, sp)
            }
            // Ill-typed application; keep it inert.
            other => other,
        }
    }

    pub fn apply_spine(&self, mut v: Value, sp: Vec<Elim>) -> Value {
        for e in sp {
            v = match e {
                Elim::App(a, m, i) => self.apply(v, a, m, i),
                Elim::Case(c) => self.case_on(v, c),
            };
        }
        v
    }

    fn case_on(&self, scrut: Value, c: CaseClosure) -> Value {
        let s = self.whnf(scrut);
        match self.select_arm(&s, &c) {
            Some(v) => v,
            None => match s {
                Value::Neutral(h, mut sp) => {
                    sp.push(Elim::Case(c));
                    Value::Neutral(h, sp)
                }
                other => other,
            },
        }
    }

    fn select_arm(&self, s: &Value, c: &CaseClosure) -> Option<Value> {
        match s {
            Value::Lit(l) => {
                for arm in c.arms.iter() {
                    if arm.pat == ArmPat::Lit(l.clone()) {
                        return Some(self.eval(&c.env, &arm.body));
                    }
                }
                c.default.as_ref().map(|d| self.eval(&c.env, d))
            }
            Value::Neutral(Head::Global(g), _) if self.is_saturated_con(s) => {
                let (_, args) = s.as_global_app()?;
                for arm in c.arms.iter() {
                    if arm.pat == ArmPat::Con(*g) {
                        let env = args.iter().fold(c.env.clone(), |e, v| e.push((*v).clone()));
                        return Some(self.eval(&env, &arm.body));
                    }
                }
                c.default.as_ref().map(|d| self.eval(&c.env, d))
            }
            _ => None,
        }
    }

    /// A constructor applied to all of its fields.
    pub fn is_saturated_con(&self, v: &Value) -> bool {
        match v.as_global_app() {
            Some((g, args)) => matches!(self.globals.get(g).kind, DefKind::Con { arity, .. } if arity == args.len()),
            None => false,
        }
    }

    /// Weak head normal form: forces solved metas, unfolds saturated
    /// definitions and primitives, and reduces case on constructors.
    pub fn whnf(&self, v: Value) -> Value {
        match v {
            Value::Neutral(h, sp) => {
                let needs_work = match &h {
                    Head::Meta(m) => self.metas.solution(*m).is_some(),
                    Head::Global(g) => matches!(self.globals.get(*g).kind, DefKind::Fun { .. } | DefKind::Prim { .. }),
                    Head::Var(_) => false,
                };
                if !needs_work {
                    return Value::Neutral(h, sp);
                }
                let mut cur = match &h {
                    Head::Meta(m) => self.metas.solution(*m).unwrap().clone(),
                    _ => Value::Neutral(h, Vec::new()),
                };
                cur = self.reduce_head(cur);
                for e in sp {
                    cur = match e {
                        Elim::App(a, m, i) => self.apply(cur, a, m, i),
                        Elim::Case(c) => self.case_on(cur, c),
                    };
                    cur = self.reduce_head(cur);
                }
                cur
            }
            v => v,
        }
    }

    /// One unfolding of a global head applied to enough arguments, then
    /// weak head normalization. `None` when the definition is stuck.
    pub fn unfold_global(&self, v: &Value) -> Option<Value> {
        let Value::Neutral(Head::Global(g), sp) = v else { return None };
        let (_, args) = v.as_global_app()?;
        let r = match &self.globals.get(*g).kind {
            DefKind::Fun { arity, tree, .. } if args.len() >= *arity => {
                let env: Vec<Value> = args[..*arity].iter().map(|a| (*a).clone()).collect();
                self.eval_tree(tree, env)?
            }
            DefKind::Prim { key, arity } if args.len() >= *arity && prims::is_pure(key) => self.reduce_prim(key, &args[..*arity])?,
            _ => return None,
        };
        let arity = match &self.globals.get(*g).kind {
            DefKind::Fun { arity, .. } | DefKind::Prim { arity, .. } => *arity,
            _ => unreachable!(),
        };
        Some(self.whnf(self.apply_spine(r, sp[arity..].to_vec())))
    }

    /// Unfolds a global or meta head once its arguments are available.
    fn reduce_head(&self, v: Value) -> Value {
        let mut v = v;
        loop {
            let next = match &v {
                Value::Neutral(Head::Meta(m), sp) => match self.metas.solution(*m) {
                    Some(sol) => self.apply_spine(sol.clone(), sp.clone()),
                    None => return v,
                },
                Value::Neutral(Head::Global(g), sp) => match &self.globals.get(*g).kind {
                    DefKind::Fun { arity, tree, .. } if sp.len() >= *arity => {
                        let Some((_, args)) = v.as_global_app() else { return v };
                        let env: Vec<Value> = args[..*arity].iter().map(|a| (*a).clone()).collect();
                        match self.eval_tree(tree, env) {
                            Some(r) => self.apply_spine(r, sp[*arity..].to_vec()),
                            None => return v,
                        }
                    }
                    DefKind::Prim { key, arity } if sp.len() >= *arity && prims::is_pure(key) => {
                        let Some((_, args)) = v.as_global_app() else { return v };
                        match self.reduce_prim(key, &args[..*arity]) {
                            Some(r) => self.apply_spine(r, sp[*arity..].to_vec()),
                            None => return v,
                        }
                    }
                    _ => return v,
                },
                _ => return v,
            };
            v = next;
        }
    }

    fn reduce_prim(&self, key: &str, args: &[&Value]) -> Option<Value> {
        let mut lits = Vec::new();
        for a in args {
            if let Value::Lit(l) = self.whnf((*a).clone()) {
                lits.push(l);
            }
        }
        match prims::apply_pure(key, &lits)? {
            PrimResult::Lit(l) => Some(Value::Lit(l)),
            PrimResult::Bool(b) => {
                let name = if b { "True" } else { "False" };
                self.globals.find_con(name).map(Value::global)
            }
        }
    }

    /// Runs a case tree on argument values; `None` when a test is stuck.
    pub fn eval_tree(&self, tree: &CaseTree, mut env: Vec<Value>) -> Option<Value> {
        let mut tree = tree;
        loop {
            match tree {
                CaseTree::Leaf { bindings, rhs, .. } => {
                    let cenv = Env::from_values(bindings.iter().map(|l| env[*l].clone()));
                    return Some(self.eval(&cenv, rhs));
                }
                CaseTree::Missing => return None,
                CaseTree::Test { var, arms, default } => {
                    let s = self.whnf(env[*var].clone());
                    env[*var] = s.clone();
                    let mut next = None;
                    match &s {
                        Value::Lit(l) => {
                            next = arms.iter().find(|a| a.pat == ArmPat::Lit(l.clone())).map(|a| &a.tree);
                        }
                        Value::Neutral(Head::Global(g), _) if self.is_saturated_con(&s) => {
                            if let Some(a) = arms.iter().find(|a| a.pat == ArmPat::Con(*g)) {
                                let (_, args) = s.as_global_app()?;
                                env.extend(args.into_iter().cloned());
                                next = Some(&a.tree);
                            }
                        }
                        _ => return None,
                    }
                    tree = match next {
                        Some(t) => t,
                        None => default.as_deref()?,
                    };
                }
            }
        }
    }

    pub fn quote(&self, depth: usize, v: &Value) -> Term {
        self.quote_with(depth, v, false)
    }

    /// Full normal form: unfolds every definition that can make progress.
    pub fn normalize(&self, depth: usize, v: &Value) -> Term {
        self.quote_with(depth, v, true)
    }

    fn quote_with(&self, depth: usize, v: &Value, unfold: bool) -> Term {
        let forced;
        let v = match v {
            Value::Neutral(Head::Meta(m), _) if self.metas.solution(*m).is_some() => {
                forced = self.whnf(v.clone());
                &forced
            }
            Value::Neutral(Head::Global(_), _) if unfold => {
                forced = self.whnf(v.clone());
                &forced
            }
            v => v,
        };
        match v {
            Value::Neutral(h, sp) => {
                let mut t = match h {
                    Head::Var(l) => Term::Var(depth - 1 - l),
                    Head::Global(g) => Term::Global(*g),
                    Head::Meta(m) => Term::Meta(*m, Vec::new()),
                };
                for e in sp {
                    t = match e {
                        Elim::App(a, m, i) => Term::app(t, self.quote_with(depth, a, unfold), *m, *i),
                        Elim::Case(c) => {
                            let arms = c
                                .arms
                                .iter()
                                .map(|arm| {
                                    let k = arm.names.len();
                                    let env = (0..k).fold(c.env.clone(), |e, j| e.push(Value::var(depth + j)));
                                    let body = self.eval(&env, &arm.body);
                                    Arm { pat: arm.pat.clone(), names: arm.names.clone(), body: Rc::new(self.quote_with(depth + k, &body, unfold)) }
                                })
                                .collect();
                            let def = c.default.as_ref().map(|d| Rc::new(self.quote_with(depth, &self.eval(&c.env, d), unfold)));
                            Term::Case(Rc::new(t), c.mult, arms, def)
                        }
                    };
                }
                t
            }
            Value::Pi(b, a, c) => {
                let b = self.quote_binder(depth, b, &c.env, unfold);
                let body = self.apply_closure(c, Value::var(depth));
                Term::pi(b, self.quote_with(depth, a, unfold), self.quote_with(depth + 1, &body, unfold))
            }
            Value::Lam(b, c) => {
                let b = self.quote_binder(depth, b, &c.env, unfold);
                let body = self.apply_closure(c, Value::var(depth));
                Term::lam(b, self.quote_with(depth + 1, &body, unfold))
            }
            Value::Type => Term::Type,
            Value::World => Term::World,
            Value::Lit(l) => Term::Lit(l.clone()),
        }
    }

    fn quote_binder(&self, depth: usize, b: &Binder, env: &Env, unfold: bool) -> Binder {
        match &b.kind {
            BinderKind::Default(d) => {
                let dv = self.eval(env, d);
                Binder { kind: BinderKind::Default(Rc::new(self.quote_with(depth, &dv, unfold))), ..b.clone() }
            }
            _ => b.clone(),
        }
    }

    /// Definitional equality, with eta for functions. Multiplicities and
    /// plicity of Pi binders must agree.
    pub fn convertible(&self, depth: usize, a: &Value, b: &Value) -> bool {
        let a = self.whnf(a.clone());
        let b = self.whnf(b.clone());
        match (&a, &b) {
            (Value::Type, Value::Type) | (Value::World, Value::World) => true,
            (Value::Lit(x), Value::Lit(y)) => x == y,
            (Value::Pi(b1, d1, c1), Value::Pi(b2, d2, c2)) => {
                b1.mult == b2.mult
                    && b1.kind.same_shape(&b2.kind)
                    && self.convertible(depth, d1, d2)
                    && self.convertible(depth + 1, &self.apply_closure(c1, Value::var(depth)), &self.apply_closure(c2, Value::var(depth)))
            }
            (Value::Lam(_, c1), Value::Lam(_, c2)) => {
                self.convertible(depth + 1, &self.apply_closure(c1, Value::var(depth)), &self.apply_closure(c2, Value::var(depth)))
            }
            (Value::Lam(bd, c), other) | (other, Value::Lam(bd, c)) => {
                let x = Value::var(depth);
                let lhs = self.apply_closure(c, x.clone());
                let rhs = self.apply(other.clone(), x, bd.mult, bd.kind.icit());
                self.convertible(depth + 1, &lhs, &rhs)
            }
            (Value::Neutral(h1, s1), Value::Neutral(h2, s2)) => h1 == h2 && self.convertible_spines(depth, s1, s2),
            _ => false,
        }
    }

    fn convertible_spines(&self, depth: usize, s1: &[Elim], s2: &[Elim]) -> bool {
        s1.len() == s2.len()
            && s1.iter().zip(s2).all(|(e1, e2)| match (e1, e2) {
                (Elim::App(a, _, _), Elim::App(b, _, _)) => self.convertible(depth, a, b),
                (Elim::Case(c1), Elim::Case(c2)) => self.convertible_cases(depth, c1, c2),
                _ => false,
            })
    }

    pub fn convertible_cases(&self, depth: usize, c1: &CaseClosure, c2: &CaseClosure) -> bool {
        if c1.arms.len() != c2.arms.len() || c1.default.is_some() != c2.default.is_some() {
            return false;
        }
        for (a1, a2) in c1.arms.iter().zip(c2.arms.iter()) {
            if a1.pat != a2.pat || a1.names.len() != a2.names.len() {
                return false;
            }
            let k = a1.names.len();
            let e1 = (0..k).fold(c1.env.clone(), |e, j| e.push(Value::var(depth + j)));
            let e2 = (0..k).fold(c2.env.clone(), |e, j| e.push(Value::var(depth + j)));
            if !self.convertible(depth + k, &self.eval(&e1, &a1.body), &self.eval(&e2, &a2.body)) {
                return false;
            }
        }
        match (&c1.default, &c2.default) {
            (Some(d1), Some(d2)) => self.convertible(depth, &self.eval(&c1.env, d1), &self.eval(&c2.env, d2)),
            _ => true,
        }
    }
}
