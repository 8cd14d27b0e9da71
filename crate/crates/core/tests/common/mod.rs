//! Shared helpers: corpus loading and constructor-ground input generation.
#![allow(dead_code)]

pub mod trees;
pub mod usage;

use qtt_core::core::{DefKind, GlobalId, Globals, Lit, Term};
use qtt_core::eval::{Eval, Value};
use qtt_core::multiplicity::Multiplicity;
use qtt_core::runtime::RValue;
use qtt_core::session::{corpus_source, Session, CORPUS};

pub const POSITIVE: [&str; 6] = ["prelude", "printf", "rle", "atm", "sessions", "utils"];

/// A session with every positive corpus module loaded.
pub fn full_session() -> Session {
    let mut s = Session::new();
    for (name, src) in CORPUS.iter().skip(1) {
        if let Err(es) = s.load_module(name, src, None) {
            panic!("{name}: {}", es[0]);
        }
    }
    s
}

/// A session with one corpus module (and its imports) loaded.
pub fn session_with(name: &str) -> Session {
    let mut s = Session::new();
    if name != "prelude" {
        s.load_module(name, corpus_source(name).unwrap(), None).unwrap_or_else(|es| panic!("{name}: {}", es[0]));
    }
    s
}

pub fn corpus_path(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(rel)
}

pub fn fixture_path(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

/// What an argument position holds, judged from the head of its type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Family(GlobalId),
    Int,
    Str,
    Char,
    Type,
    /// A type variable; instantiated at `Int`.
    Param,
    /// Functions, abstract types and computed types.
    Opaque,
}

pub fn shape(gs: &Globals, t: &Term) -> Shape {
    let (h, _) = t.spine();
    match h {
        Term::Type => Shape::Type,
        Term::Var(_) => Shape::Param,
        Term::Global(g) => match (&gs.get(*g).kind, gs.name(*g)) {
            (DefKind::TyCon { .. }, "Int") => Shape::Int,
            (DefKind::TyCon { .. }, "String") => Shape::Str,
            (DefKind::TyCon { .. }, "Char") => Shape::Char,
            (DefKind::TyCon { cons, .. }, _) if !cons.is_empty() => Shape::Family(*g),
            _ => Shape::Opaque,
        },
        _ => Shape::Opaque,
    }
}

/// Binders of a Pi telescope, up to `limit`.
pub fn telescope(t: &Term, limit: usize) -> Vec<(Multiplicity, qtt_core::core::Icit, Term)> {
    let mut out = Vec::new();
    let mut t = t;
    while out.len() < limit {
        match t {
            Term::Pi(b, dom, cod) => {
                out.push((b.mult, b.kind.icit(), (**dom).clone()));
                t = cod;
            }
            _ => break,
        }
    }
    out
}

pub struct Gen<'a> {
    pub gs: &'a Globals,
    pub ev: Eval<'a>,
    pub per_type: usize,
}

impl<'a> Gen<'a> {
    pub fn new(s: &'a Session) -> Gen<'a> {
        Gen { gs: &s.elab.globals, ev: Eval::new(&s.elab.globals, &s.elab.metas), per_type: 24 }
    }

    fn tycon(&self, name: &str) -> Value {
        Value::global(self.gs.find_tycon(name).unwrap())
    }

    /// Ground values of a shape, with at most `depth` nested constructors.
    pub fn values(&self, sh: Shape, depth: usize) -> Vec<Value> {
        match sh {
            Shape::Int | Shape::Param => vec![Value::Lit(Lit::Int(0)), Value::Lit(Lit::Int(1)), Value::Lit(Lit::Int(1234))],
            Shape::Str => vec![Value::Lit(Lit::Str(String::new())), Value::Lit(Lit::Str("ab".into()))],
            Shape::Char => vec![Value::Lit(Lit::Char('a'))],
            Shape::Type => vec![self.tycon("Int"), self.tycon("Nat")],
            Shape::Opaque => Vec::new(),
            Shape::Family(_) if depth == 0 => Vec::new(),
            Shape::Family(g) => {
                let DefKind::TyCon { cons, .. } = &self.gs.get(g).kind else { unreachable!() };
                let mut out = Vec::new();
                for c in cons {
                    let fields = telescope(&self.gs.get(*c).ty, usize::MAX);
                    let choices: Vec<Vec<Value>> = fields.iter().map(|(_, _, d)| self.values(shape(self.gs, d), depth - 1)).collect();
                    if choices.iter().any(Vec::is_empty) {
                        continue;
                    }
                    for combo in product(&choices, self.per_type) {
                        let v = fields
                            .iter()
                            .zip(combo)
                            .fold(Value::global(*c), |f, ((m, icit, _), a)| self.ev.apply(f, a, *m, *icit));
                        out.push(v);
                    }
                }
                // Interleave so truncation keeps every constructor.
                out.sort_by_key(size);
                out.truncate(self.per_type);
                out
            }
        }
    }

    /// Argument tuples for a function: ground values where the type allows,
    /// a neutral variable otherwise. The flag says whether every run-time
    /// argument is ground.
    pub fn arg_tuples(&self, g: GlobalId, arity: usize, depth: usize, cap: usize) -> Vec<(Vec<Value>, bool)> {
        let tele = telescope(&self.gs.get(g).ty, arity);
        if tele.len() < arity {
            return Vec::new();
        }
        let mut choices = Vec::new();
        let mut opaque = Vec::new();
        for (i, (m, _, d)) in tele.iter().enumerate() {
            let vs = self.values(shape(self.gs, d), depth);
            if vs.is_empty() {
                choices.push(vec![Value::var(i)]);
                opaque.push(*m != Multiplicity::Zero);
            } else {
                choices.push(vs);
                opaque.push(false);
            }
        }
        let ground = !opaque.iter().any(|o| *o);
        product(&choices, cap).into_iter().map(|args| (args, ground)).collect()
    }
}

fn size(v: &Value) -> usize {
    match v.as_global_app() {
        Some((_, xs)) => 1 + xs.iter().map(|x| size(x)).sum::<usize>(),
        None => 1,
    }
}

/// Cartesian product, at most `cap` tuples, in odometer order.
pub fn product(choices: &[Vec<Value>], cap: usize) -> Vec<Vec<Value>> {
    let mut out = Vec::new();
    let mut idx = vec![0; choices.len()];
    if choices.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        out.push(idx.iter().zip(choices).map(|(i, c)| c[*i].clone()).collect());
        if out.len() >= cap {
            return out;
        }
        let mut k = choices.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Every function definition from a corpus module, with its arity.
pub fn corpus_functions(gs: &Globals) -> Vec<(GlobalId, usize)> {
    gs.defs
        .iter()
        .enumerate()
        .filter_map(|(g, d)| match &d.kind {
            DefKind::Fun { arity, .. } if POSITIVE.contains(&d.module.as_str()) => Some((g, *arity)),
            _ => None,
        })
        .collect()
}

/// The run-time image of a ground core value: zero fields dropped, types erased.
pub fn to_runtime(gs: &Globals, ev: &Eval, v: &Value) -> Option<RValue> {
    match ev.whnf(v.clone()) {
        Value::Lit(l) => Some(RValue::Lit(l)),
        Value::Type | Value::Pi(..) => Some(RValue::Erased),
        w => {
            let (g, args) = w.as_global_app()?;
            match &gs.get(g).kind {
                DefKind::TyCon { .. } => Some(RValue::Erased),
                DefKind::Con { field_mults, .. } if args.len() == field_mults.len() => {
                    let mut fs = Vec::new();
                    for (m, a) in field_mults.iter().zip(args) {
                        if *m != Multiplicity::Zero {
                            fs.push(to_runtime(gs, ev, a)?);
                        }
                    }
                    Some(RValue::Con(g, std::rc::Rc::new(fs)))
                }
                _ => None,
            }
        }
    }
}

/// Whether a value is made of constructors and literals only, with no types inside.
pub fn first_order(gs: &Globals, ev: &Eval, v: &Value) -> bool {
    match ev.whnf(v.clone()) {
        Value::Lit(_) => true,
        w => match w.as_global_app() {
            Some((g, args)) => match &gs.get(g).kind {
                DefKind::Con { field_mults, .. } => {
                    args.len() == field_mults.len()
                        && field_mults.iter().zip(args).all(|(m, a)| *m == Multiplicity::Zero || first_order(gs, ev, a))
                }
                _ => false,
            },
            None => false,
        },
    }
}
