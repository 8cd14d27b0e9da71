//! Elaboration of surface declarations into the core, with usage accounting
//! for multiplicities, implicit arguments, holes and dependent matching.

mod app;
mod clause;
mod ctx;
mod decl;
mod holes;
mod term;
mod unify;
mod usage;
mod zonk;

pub use ctx::{Ctx, Entry};
pub use holes::{HoleInfo, HoleReport};
pub use usage::count_relevant;

use crate::core::*;
use crate::error::{Error, ErrorKind};
use crate::eval::{Eval, Metas, Value};
use crate::multiplicity::{Multiplicity, UsageVector};
use crate::pretty;
use crate::syntax::Span;
use std::collections::HashMap;
use std::ops::Range;
use std::rc::Rc;

/// Whether a term is being checked for its run-time content or only as a type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Erased,
    Relevant,
}

impl Mode {
    /// Mode for an argument at a position of the given multiplicity.
    pub fn arg(self, m: Multiplicity) -> Mode {
        if self == Mode::Erased || m == Multiplicity::Zero {
            Mode::Erased
        } else {
            Mode::Relevant
        }
    }
}

#[derive(Debug, Clone)]
pub enum MetaKind {
    Plain,
    /// Solved by constructor search once the enclosing application is done.
    Auto { ctx: Ctx, goal: Value, applied: Value },
    /// Solved with `value` if still open after the enclosing application.
    Default { value: Value, applied: Value, depth: usize },
}

#[derive(Debug, Clone)]
pub struct MetaInfo {
    pub span: Span,
    pub kind: MetaKind,
    /// Binder name, context depth and type of an implicit argument.
    pub implicit: Option<(String, usize, Value)>,
}

#[derive(Debug, Clone)]
pub struct Warning {
    pub span: Span,
    pub message: String,
}

pub(crate) struct Snapshot {
    metas: Metas,
    infos: usize,
    holes: usize,
    globals: usize,
}

pub type Usage = UsageVector;

pub struct Elab {
    pub globals: Globals,
    pub metas: Metas,
    pub meta_info: Vec<MetaInfo>,
    /// Every global name in scope, with overloads in declaration order.
    pub scope: HashMap<String, Vec<GlobalId>>,
    /// Holes of the declaration being elaborated.
    pub(crate) holes: Vec<HoleInfo>,
    pub reports: Vec<HoleReport>,
    pub warnings: Vec<Warning>,
    pub module: String,
    pub file: Option<String>,
    fresh: usize,
}

impl Default for Elab {
    fn default() -> Self {
        Elab::new()
    }
}

impl Elab {
    pub fn new() -> Elab {
        Elab {
            globals: Globals::default(),
            metas: Metas::default(),
            meta_info: Vec::new(),
            scope: HashMap::new(),
            holes: Vec::new(),
            reports: Vec::new(),
            warnings: Vec::new(),
            module: String::new(),
            file: None,
            fresh: 0,
        }
    }

    pub fn ev(&self) -> Eval<'_> {
        Eval::new(&self.globals, &self.metas)
    }

    pub(crate) fn fresh_name(&mut self, base: &str) -> String {
        self.fresh += 1;
        format!("${base}{}", self.fresh)
    }

    pub(crate) fn err(&self, kind: ErrorKind, span: Span, msg: impl Into<String>) -> Error {
        let e = Error::new(kind, span, msg.into());
        match &self.file {
            Some(f) => e.with_file(f),
            None => e,
        }
    }

    pub(crate) fn snapshot(&self) -> Snapshot {
        Snapshot { metas: self.metas.clone(), infos: self.meta_info.len(), holes: self.holes.len(), globals: self.globals.defs.len() }
    }

    pub(crate) fn restore(&mut self, s: Snapshot) {
        self.metas = s.metas;
        self.meta_info.truncate(s.infos);
        self.holes.truncate(s.holes);
        if self.globals.defs.len() > s.globals {
            self.globals.defs.truncate(s.globals);
            for ids in self.scope.values_mut() {
                ids.retain(|g| *g < s.globals);
            }
            self.scope.retain(|_, ids| !ids.is_empty());
        }
    }

    pub(crate) fn fresh_meta(&mut self, ctx: &Ctx, span: Span, kind: MetaKind) -> (Term, Value) {
        let m = self.metas.solutions.len();
        self.metas.solutions.push(None);
        self.meta_info.push(MetaInfo { span, kind, implicit: None });
        let t = Term::Meta(m, ctx.bound_indices());
        let v = self.ev().eval(ctx.env(), &t);
        (t, v)
    }

    pub fn add_to_scope(&mut self, name: &str, g: GlobalId) {
        self.scope.entry(name.to_string()).or_default().push(g);
    }

    pub fn lookup_global(&self, name: &str) -> &[GlobalId] {
        self.scope.get(name).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// The most recent type constructor with this name.
    pub fn tycon_named(&self, name: &str) -> Option<GlobalId> {
        self.lookup_global(name).iter().rev().copied().find(|g| matches!(self.globals.get(*g).kind, DefKind::TyCon { .. }))
    }

    pub fn show_term(&self, names: &[String], t: &Term) -> String {
        pretty::term_to_string(&self.globals, names, t)
    }

    pub fn show_value(&self, ctx: &Ctx, v: &Value) -> String {
        let t = self.ev().quote(ctx.len(), v);
        self.show_term(&ctx.names(), &t)
    }

    /// Hole usage bookkeeping: every hole recorded while elaborating one part
    /// sees the usage of all sibling parts as already spent.
    pub(crate) fn share_usage(&mut self, parts: &[(Range<usize>, &Usage)]) {
        for (i, (range, _)) in parts.iter().enumerate() {
            for h in range.clone() {
                for (j, (_, u)) in parts.iter().enumerate() {
                    if i != j {
                        self.holes[h].other.add_assign(u);
                    }
                }
            }
        }
    }

    pub fn global_type_string(&self, g: GlobalId) -> String {
        self.show_term(&[], &self.globals.get(g).ty)
    }
}

pub(crate) fn rc(t: Term) -> Rc<Term> {
    Rc::new(t)
}
