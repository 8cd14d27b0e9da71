//! Interpreter for erased definitions: strict evaluation, primitive IO over
//! a linear world token, and cooperative processes talking over channels.

mod sched;
mod value;

pub use sched::{run_main, Input, RunOutcome};
pub use value::{Action, Callee, End, REnv, RValue};

use crate::core::{ArmPat, DefKind, GlobalId, Globals, Lit};
use crate::erasure::{erase_all, Eraser, RTerm, RuntimeDef};
use crate::error::Error;
use crate::prims::{self, PrimResult};
use std::collections::HashMap;
use std::rc::Rc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RuntimeError {
    #[error("stale world token: generation {got} used when {current} is current")]
    StaleWorld { got: u64, current: u64 },
    #[error("deadlock: processes {blocked:?} are blocked forever")]
    Deadlock { blocked: Vec<usize> },
    #[error("send on closed channel {0}")]
    SendOnClosed(usize),
    #[error("receive on closed channel {0}")]
    RecvOnClosed(usize),
    #[error("primitive failed: {0}")]
    Primitive(String),
    #[error("no clause matches in {0}")]
    NoMatch(String),
    #[error("{0} has no run-time definition")]
    Undefined(String),
    #[error("ill-formed value: {0}")]
    BadValue(String),
}

type R<T> = Result<T, RuntimeError>;

/// Erased definitions ready to run.
pub struct Program {
    pub globals: Globals,
    pub defs: HashMap<GlobalId, RuntimeDef>,
    prim_arity: HashMap<GlobalId, usize>,
    con_arity: HashMap<GlobalId, usize>,
}

impl Program {
    pub fn new(globals: &Globals) -> Result<Program, Error> {
        let defs = erase_all(globals)?.into_iter().map(|d| (d.global, d)).collect();
        let er = Eraser::new(globals);
        let mut prim_arity = HashMap::new();
        let mut con_arity = HashMap::new();
        for (g, d) in globals.defs.iter().enumerate() {
            match &d.kind {
                DefKind::Prim { .. } => {
                    prim_arity.insert(g, er.prim_arity(g));
                }
                DefKind::Con { field_mults, .. } => {
                    con_arity.insert(g, field_mults.iter().filter(|m| **m != crate::multiplicity::Multiplicity::Zero).count());
                }
                _ => {}
            }
        }
        Ok(Program { globals: globals.clone(), defs, prim_arity, con_arity })
    }

    pub fn find(&self, name: &str) -> Option<GlobalId> {
        self.globals.defs.iter().rposition(|d| d.name == name && matches!(d.kind, DefKind::Fun { .. }))
    }

    fn con(&self, name: &str) -> R<GlobalId> {
        self.globals.find_con(name).ok_or_else(|| RuntimeError::Undefined(name.to_string()))
    }
}

/// Evaluation state shared by every process.
pub struct Machine<'p> {
    pub prog: &'p Program,
    /// Current world generation.
    pub world: u64,
    /// Generation produced by each primitive world step, in order.
    pub world_trace: Vec<u64>,
    pub stdout: String,
    pub echo: bool,
    pub input: Input,
    cafs: HashMap<GlobalId, RValue>,
}

impl<'p> Machine<'p> {
    pub fn new(prog: &'p Program, input: Input) -> Machine<'p> {
        Machine { prog, world: 0, world_trace: Vec::new(), stdout: String::new(), echo: false, input, cafs: HashMap::new() }
    }

    pub fn eval(&mut self, env: &REnv, t: &RTerm) -> R<RValue> {
        match t {
            RTerm::Var(i) => env.get(*i).cloned().ok_or_else(|| RuntimeError::BadValue(format!("unbound variable #{i}"))),
            RTerm::Global(g) => self.global(*g),
            RTerm::Lam(_, body) => Ok(RValue::Closure(env.clone(), body.clone())),
            RTerm::App(f, a) => {
                let f = self.eval(env, f)?;
                let a = self.eval(env, a)?;
                self.apply(f, a)
            }
            RTerm::Con(c, args) => {
                let vs = args.iter().map(|a| self.eval(env, a)).collect::<R<Vec<_>>>()?;
                Ok(RValue::Con(*c, Rc::new(vs)))
            }
            RTerm::Prim(p, args) => {
                let vs = args.iter().map(|a| self.eval(env, a)).collect::<R<Vec<_>>>()?;
                self.prim(*p, vs)
            }
            RTerm::Case(s, arms, def) => {
                let v = self.eval(env, s)?;
                for a in arms {
                    match (&a.pat, &v) {
                        (ArmPat::Con(c), RValue::Con(g, fields)) if c == g => {
                            let env = fields.iter().fold(env.clone(), |e, f| e.push(f.clone()));
                            return self.eval(&env, &a.body);
                        }
                        (ArmPat::Lit(l), RValue::Lit(x)) if l == x => return self.eval(env, &a.body),
                        _ => {}
                    }
                }
                match def {
                    Some(d) => self.eval(env, d),
                    None => Err(RuntimeError::NoMatch(format!("case on {}", self.show(&v)))),
                }
            }
            RTerm::Let(_, v, body) => {
                let v = self.eval(env, v)?;
                self.eval(&env.push(v), body)
            }
            RTerm::Lit(l) => Ok(RValue::Lit(l.clone())),
            RTerm::Erased => Ok(RValue::Erased),
            RTerm::Missing => Err(RuntimeError::NoMatch("a definition".into())),
        }
    }

    fn global(&mut self, g: GlobalId) -> R<RValue> {
        if let Some(v) = self.cafs.get(&g) {
            return Ok(v.clone());
        }
        let prog = self.prog;
        let name = || prog.globals.name(g).to_string();
        match &prog.globals.get(g).kind {
            DefKind::Fun { .. } => {
                let def = prog.defs.get(&g).ok_or_else(|| RuntimeError::Undefined(name()))?;
                if def.params.is_empty() {
                    let v = self.eval(&REnv::default(), &def.body).map_err(|e| in_def(e, &def.name))?;
                    self.cafs.insert(g, v.clone());
                    Ok(v)
                } else {
                    Ok(RValue::Partial(Callee::Fun(g), def.params.len(), Rc::new(Vec::new())))
                }
            }
            DefKind::Con { .. } => match prog.con_arity[&g] {
                0 => Ok(RValue::Con(g, Rc::new(Vec::new()))),
                n => Ok(RValue::Partial(Callee::Con(g), n, Rc::new(Vec::new()))),
            },
            DefKind::Prim { .. } => match prog.prim_arity[&g] {
                0 => self.prim(g, Vec::new()),
                n => Ok(RValue::Partial(Callee::Prim(g), n, Rc::new(Vec::new()))),
            },
            DefKind::TyCon { .. } => Ok(RValue::Erased),
            DefKind::Pending | DefKind::Hole => Err(RuntimeError::Undefined(name())),
        }
    }

    pub fn apply(&mut self, f: RValue, a: RValue) -> R<RValue> {
        match f {
            RValue::Closure(env, body) => self.eval(&env.push(a), &body),
            RValue::Partial(c, n, args) => {
                let mut args = Rc::unwrap_or_clone(args);
                args.push(a);
                if args.len() < n {
                    return Ok(RValue::Partial(c, n, Rc::new(args)));
                }
                match c {
                    Callee::Fun(g) => {
                        let def = &self.prog.defs[&g];
                        let env = REnv::from_values(args);
                        self.eval(&env, &def.body).map_err(|e| in_def(e, &def.name))
                    }
                    Callee::Con(g) => Ok(RValue::Con(g, Rc::new(args))),
                    Callee::Prim(g) => self.prim(g, args),
                }
            }
            RValue::Erased => Ok(RValue::Erased),
            other => Err(RuntimeError::BadValue(format!("{} is not a function", self.show(&other)))),
        }
    }

    pub fn apply_all(&mut self, f: RValue, args: Vec<RValue>) -> R<RValue> {
        args.into_iter().try_fold(f, |f, a| self.apply(f, a))
    }

    fn bool(&self, b: bool) -> R<RValue> {
        Ok(RValue::Con(self.prog.con(if b { "True" } else { "False" })?, Rc::new(Vec::new())))
    }

    pub fn unit(&self) -> R<RValue> {
        Ok(RValue::Con(self.prog.con("MkUnit")?, Rc::new(Vec::new())))
    }

    /// `MkIORes x w`.
    fn io_res(&self, x: RValue, w: RValue) -> R<RValue> {
        Ok(RValue::Con(self.prog.con("MkIORes")?, Rc::new(vec![x, w])))
    }

    /// Consumes a world token and returns its successor.
    pub fn step_world(&mut self, w: &RValue) -> R<RValue> {
        match w {
            RValue::World(g) if *g == self.world => {
                self.world += 1;
                self.world_trace.push(self.world);
                Ok(RValue::World(self.world))
            }
            RValue::World(g) => Err(RuntimeError::StaleWorld { got: *g, current: self.world }),
            other => Err(RuntimeError::BadValue(format!("expected the world, got {}", self.show(other)))),
        }
    }

    pub fn write_line(&mut self, s: &str) {
        self.stdout.push_str(s);
        self.stdout.push('\n');
        if self.echo {
            println!("{s}");
        }
    }

    fn prim(&mut self, g: GlobalId, args: Vec<RValue>) -> R<RValue> {
        let DefKind::Prim { key, .. } = &self.prog.globals.get(g).kind else { unreachable!() };
        let key = key.as_str();
        if prims::is_pure(key) {
            let lits: Vec<Lit> = args
                .iter()
                .map(|a| match a {
                    RValue::Lit(l) => Ok(l.clone()),
                    other => Err(RuntimeError::Primitive(format!("{key} applied to {}", self.show(other)))),
                })
                .collect::<R<_>>()?;
            return match prims::apply_pure(key, &lits) {
                Some(PrimResult::Lit(l)) => Ok(RValue::Lit(l)),
                Some(PrimResult::Bool(b)) => self.bool(b),
                None => Err(RuntimeError::Primitive(format!("{key} on {lits:?}"))),
            };
        }
        let act = |a: Action| Ok(RValue::Action(Rc::new(a)));
        let last = |args: &[RValue], k: usize| args[args.len() - k..].to_vec();
        match key {
            "put_str_ln" => {
                let [s, w] = &args[..] else { return Err(arity(key)) };
                let RValue::Lit(Lit::Str(s)) = s else { return Err(RuntimeError::Primitive(format!("put_str_ln on {}", self.show(s)))) };
                let w = self.step_world(w)?;
                let s = s.clone();
                self.write_line(&s);
                self.io_res(self.unit()?, w)
            }
            "get_line" => {
                let [w] = &args[..] else { return Err(arity(key)) };
                let w = self.step_world(w)?;
                let line = self.input.read_line();
                self.io_res(RValue::Lit(Lit::Str(line)), w)
            }
            "l_pure" | "l_pure1" => act(Action::Pure(args.last().cloned().ok_or_else(|| arity(key))?)),
            "l_pure0" => act(Action::Pure(RValue::Erased)),
            "l_action" => act(Action::Io(args.last().cloned().ok_or_else(|| arity(key))?)),
            "l_bind" => {
                if args.len() < 2 {
                    return Err(arity(key));
                }
                let v = last(&args, 2);
                act(Action::Bind(v[0].clone(), v[1].clone()))
            }
            "ref_new" | "ref_read" | "ref_free" | "ch_recv" | "ch_close" | "ch_fork" => act(Action::Effect(static_key(key), last(&args, 1))),
            "ref_write" | "ch_send" => {
                if args.len() < 2 {
                    return Err(arity(key));
                }
                act(Action::Effect(static_key(key), last(&args, 2)))
            }
            _ => Err(RuntimeError::Primitive(format!("unknown primitive {key}"))),
        }
    }

    /// Runs an `IO` value to its result.
    pub fn run_io(&mut self, io: RValue) -> R<RValue> {
        let RValue::Con(c, fields) = &io else {
            return Err(RuntimeError::BadValue(format!("expected an IO action, got {}", self.show(&io))));
        };
        if self.prog.globals.name(*c) != "MkIO" || fields.len() != 1 {
            return Err(RuntimeError::BadValue(format!("expected an IO action, got {}", self.show(&io))));
        }
        let r = self.apply(fields[0].clone(), RValue::World(self.world))?;
        match &r {
            RValue::Con(c, fs) if self.prog.globals.name(*c) == "MkIORes" && fs.len() == 2 => {
                match &fs[1] {
                    RValue::World(g) if *g == self.world => {}
                    RValue::World(g) => return Err(RuntimeError::StaleWorld { got: *g, current: self.world }),
                    other => return Err(RuntimeError::BadValue(format!("expected the world, got {}", self.show(other)))),
                }
                Ok(fs[0].clone())
            }
            _ => Err(RuntimeError::BadValue(format!("expected an IO result, got {}", self.show(&r)))),
        }
    }

    /// Surface-like rendering of a value.
    pub fn show(&self, v: &RValue) -> String {
        show_value(&self.prog.globals, v)
    }
}

fn arity(key: &str) -> RuntimeError {
    RuntimeError::Primitive(format!("{key} applied to the wrong number of arguments"))
}

fn static_key(key: &str) -> &'static str {
    ["ref_new", "ref_read", "ref_write", "ref_free", "ch_send", "ch_recv", "ch_close", "ch_fork"]
        .into_iter()
        .find(|k| *k == key)
        .unwrap_or("unknown")
}

fn in_def(e: RuntimeError, name: &str) -> RuntimeError {
    match e {
        RuntimeError::NoMatch(w) if w == "a definition" => RuntimeError::NoMatch(name.to_string()),
        e => e,
    }
}

pub fn show_value(gs: &Globals, v: &RValue) -> String {
    fn atom(gs: &Globals, v: &RValue) -> String {
        let s = show_value(gs, v);
        match v {
            RValue::Con(c, fs) if !fs.is_empty() && !matches!(gs.name(*c), "::" | "MkPair" | "Nil") => format!("({s})"),
            _ => s,
        }
    }
    match v {
        RValue::Lit(l) => crate::pretty::lit(l),
        RValue::Con(c, fs) => {
            let name = gs.name(*c);
            match (name, fs.len()) {
                ("MkUnit", 0) => "()".into(),
                ("Nil", 0) => "[]".into(),
                ("MkPair", 2) => format!("({}, {})", show_value(gs, &fs[0]), show_value(gs, &fs[1])),
                ("::", 2) => {
                    let mut items = vec![show_value(gs, &fs[0])];
                    let mut rest = &fs[1];
                    while let RValue::Con(c2, f2) = rest {
                        if gs.name(*c2) == "::" && f2.len() == 2 {
                            items.push(show_value(gs, &f2[0]));
                            rest = &f2[1];
                        } else {
                            break;
                        }
                    }
                    match rest {
                        RValue::Con(c2, f2) if gs.name(*c2) == "Nil" && f2.is_empty() => format!("[{}]", items.join(", ")),
                        _ => format!("{} :: {}", items.join(" :: "), atom(gs, rest)),
                    }
                }
                _ => {
                    let mut s = name.to_string();
                    for f in fs.iter() {
                        s.push(' ');
                        s.push_str(&atom(gs, f));
                    }
                    s
                }
            }
        }
        RValue::Closure(..) | RValue::Partial(..) => "<function>".into(),
        RValue::World(g) => format!("%World#{g}"),
        RValue::Chan(c, e) => format!("<channel {c}{e:?}>"),
        RValue::Ref(r) => format!("<ref {r}>"),
        RValue::Action(_) => "<action>".into(),
        RValue::Erased => "_".into(),
    }
}
