//! The elaborated core: nameless terms whose binders and applications carry
//! multiplicities, plus the global definition table.

use crate::multiplicity::Multiplicity;
use std::rc::Rc;

pub type GlobalId = usize;
pub type MetaId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Icit {
    Explicit,
    Implicit,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BinderKind {
    Explicit,
    Implicit,
    Auto,
    /// Default value, scoped like the binder's domain.
    Default(Rc<Term>),
}

impl BinderKind {
    pub fn icit(&self) -> Icit {
        match self {
            BinderKind::Explicit => Icit::Explicit,
            _ => Icit::Implicit,
        }
    }

    /// Same plicity, ignoring default values.
    pub fn same_shape(&self, other: &BinderKind) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binder {
    pub name: String,
    pub mult: Multiplicity,
    pub kind: BinderKind,
}

impl Binder {
    pub fn new(name: &str, mult: Multiplicity, kind: BinderKind) -> Binder {
        Binder { name: name.to_string(), mult, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Lit {
    Int(i64),
    Str(String),
    Char(char),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ArmPat {
    Con(GlobalId),
    Lit(Lit),
}

/// One case alternative; `body` is under `names.len()` field binders.
#[derive(Debug, Clone, PartialEq)]
pub struct Arm {
    pub pat: ArmPat,
    pub names: Vec<String>,
    pub body: Rc<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    /// de Bruijn index.
    Var(usize),
    Global(GlobalId),
    /// A metavariable applied to the listed bound variables (indices).
    Meta(MetaId, Vec<usize>),
    Type,
    World,
    Pi(Binder, Rc<Term>, Rc<Term>),
    Lam(Binder, Rc<Term>),
    App(Rc<Term>, Rc<Term>, Multiplicity, Icit),
    Let(Binder, Rc<Term>, Rc<Term>, Rc<Term>),
    Case(Rc<Term>, Multiplicity, Vec<Arm>, Option<Rc<Term>>),
    Lit(Lit),
}

impl Term {
    pub fn app(f: Term, a: Term, m: Multiplicity, icit: Icit) -> Term {
        Term::App(Rc::new(f), Rc::new(a), m, icit)
    }

    pub fn pi(b: Binder, dom: Term, cod: Term) -> Term {
        Term::Pi(b, Rc::new(dom), Rc::new(cod))
    }

    pub fn lam(b: Binder, body: Term) -> Term {
        Term::Lam(b, Rc::new(body))
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<(&Term, Multiplicity, Icit)>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a, m, i) = t {
            args.push((&**a, *m, *i));
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// Whether every variable index is bound within `depth` enclosing binders.
    pub fn well_scoped(&self, depth: usize) -> bool {
        match self {
            Term::Var(i) => *i < depth,
            Term::Meta(_, xs) => xs.iter().all(|i| *i < depth),
            Term::Global(_) | Term::Type | Term::World | Term::Lit(_) => true,
            Term::Pi(b, a, c) => kind_scoped(&b.kind, depth) && a.well_scoped(depth) && c.well_scoped(depth + 1),
            Term::Lam(b, body) => kind_scoped(&b.kind, depth) && body.well_scoped(depth + 1),
            Term::App(f, a, _, _) => f.well_scoped(depth) && a.well_scoped(depth),
            Term::Let(_, ty, v, body) => ty.well_scoped(depth) && v.well_scoped(depth) && body.well_scoped(depth + 1),
            Term::Case(s, _, arms, def) => {
                s.well_scoped(depth)
                    && arms.iter().all(|a| a.body.well_scoped(depth + a.names.len()))
                    && def.as_ref().is_none_or(|d| d.well_scoped(depth))
            }
        }
    }

    /// Whether index `i` (relative to this term's scope) occurs free.
    pub fn mentions(&self, i: usize) -> bool {
        match self {
            Term::Var(j) => *j == i,
            Term::Meta(_, xs) => xs.contains(&i),
            Term::Global(_) | Term::Type | Term::World | Term::Lit(_) => false,
            Term::Pi(_, a, c) => a.mentions(i) || c.mentions(i + 1),
            Term::Lam(_, b) => b.mentions(i + 1),
            Term::App(f, a, _, _) => f.mentions(i) || a.mentions(i),
            Term::Let(_, ty, v, b) => ty.mentions(i) || v.mentions(i) || b.mentions(i + 1),
            Term::Case(s, _, arms, def) => {
                s.mentions(i)
                    || arms.iter().any(|a| a.body.mentions(i + a.names.len()))
                    || def.as_ref().is_some_and(|d| d.mentions(i))
            }
        }
    }
}

fn kind_scoped(k: &BinderKind, depth: usize) -> bool {
    match k {
        BinderKind::Default(d) => d.well_scoped(depth),
        _ => true,
    }
}

/// A compiled pattern-match over a function's arguments. Variables are
/// levels into the tree environment: the arguments first, then the fields
/// bound by each enclosing test.
#[derive(Debug, Clone, PartialEq)]
pub enum CaseTree {
    Leaf {
        clause: usize,
        /// For every variable of the clause context, its tree level.
        bindings: Vec<usize>,
        /// Right-hand side, scoped over the clause context.
        rhs: Rc<Term>,
    },
    Test {
        var: usize,
        arms: Vec<TreeArm>,
        default: Option<Box<CaseTree>>,
    },
    Missing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeArm {
    pub pat: ArmPat,
    /// Number of fields bound; they take the next tree levels.
    pub arity: usize,
    pub tree: CaseTree,
}

/// A clause pattern; every position records the clause-context level it binds.
#[derive(Debug, Clone, PartialEq)]
pub enum Pat {
    Var(usize),
    /// One sub-pattern per constructor field, implicit ones included.
    Con(usize, GlobalId, Vec<Pat>),
    Lit(usize, Lit),
}

impl Pat {
    pub fn level(&self) -> usize {
        match self {
            Pat::Var(l) | Pat::Con(l, _, _) | Pat::Lit(l, _) => *l,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoreClause {
    /// One pattern per function argument (levels `0..arity`).
    pub pats: Vec<Pat>,
    pub depth: usize,
    /// Multiplicity of each clause-context variable.
    pub mults: Vec<Multiplicity>,
    pub rhs: Rc<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DefKind {
    /// Signature seen, definition not yet elaborated.
    Pending,
    Fun {
        arity: usize,
        tree: CaseTree,
        clauses: Vec<CoreClause>,
    },
    Con {
        tycon: GlobalId,
        tag: usize,
        arity: usize,
        field_mults: Vec<Multiplicity>,
        field_names: Vec<String>,
    },
    TyCon {
        arity: usize,
        cons: Vec<GlobalId>,
    },
    Prim {
        key: String,
        arity: usize,
    },
    Hole,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalDef {
    pub name: String,
    pub ty: Rc<Term>,
    pub kind: DefKind,
    /// Source module the definition came from.
    pub module: String,
}

#[derive(Debug, Clone, Default)]
pub struct Globals {
    pub defs: Vec<GlobalDef>,
}

impl Globals {
    pub fn get(&self, id: GlobalId) -> &GlobalDef {
        &self.defs[id]
    }

    pub fn add(&mut self, def: GlobalDef) -> GlobalId {
        self.defs.push(def);
        self.defs.len() - 1
    }

    pub fn name(&self, id: GlobalId) -> &str {
        &self.defs[id].name
    }

    /// The most recently defined global with this name and matching predicate.
    pub fn find(&self, name: &str, pred: impl Fn(&DefKind) -> bool) -> Option<GlobalId> {
        self.defs.iter().rposition(|d| d.name == name && pred(&d.kind))
    }

    pub fn find_con(&self, name: &str) -> Option<GlobalId> {
        self.find(name, |k| matches!(k, DefKind::Con { .. }))
    }

    pub fn find_tycon(&self, name: &str) -> Option<GlobalId> {
        self.find(name, |k| matches!(k, DefKind::TyCon { .. }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplicity::Omega;

    #[test]
    fn well_scoped_examples() {
        let id = Term::lam(Binder::new("x", Omega, BinderKind::Explicit), Term::Var(0));
        assert!(id.well_scoped(0));
        assert!(!Term::Var(0).well_scoped(0));
        let arm = Arm { pat: ArmPat::Lit(Lit::Int(0)), names: vec!["y".into()], body: Rc::new(Term::Var(1)) };
        let case = Term::Case(Rc::new(Term::Var(0)), Omega, vec![arm], None);
        assert!(case.well_scoped(1));
        assert!(!case.well_scoped(0));
    }
}
