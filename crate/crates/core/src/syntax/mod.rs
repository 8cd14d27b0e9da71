//! Surface syntax: the sugar-bearing tree produced by the parser.

mod desugar;
mod print;

pub use desugar::{autobind_implicits, desugar_decl, desugar_do, desugar_literals, desugar_term};
pub use print::{print_decl, print_module, print_term};

use crate::multiplicity::Multiplicity;

/// A source range. Spans never take part in equality so that trees compare
/// structurally.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Span {
    pub fn new(line: u32, col: u32, end_line: u32, end_col: u32) -> Span {
        Span { line, col, end_line, end_col }
    }

    pub fn to(self, other: Span) -> Span {
        Span { line: self.line, col: self.col, end_line: other.end_line, end_col: other.end_col }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Int(i64),
    Str(String),
    Char(char),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Plicity {
    Explicit,
    Implicit,
    Auto,
    Default(Box<Term>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiBinder {
    pub name: Option<String>,
    pub mult: Option<Multiplicity>,
    pub plicity: Plicity,
    pub ty: Box<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Explicit(Term),
    /// `{name = term}`; `{name}` is parsed as `{name = name}`.
    Named(String, Term),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LetBind {
    pub pat: Pattern,
    pub ty: Option<Term>,
    pub value: Term,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alt {
    pub pat: Pattern,
    pub body: Term,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Bind(Pattern, Term),
    Let(Vec<LetBind>),
    Expr(Term),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    Var(String),
    App(Box<Term>, Box<Arg>),
    Lam(Vec<Pattern>, Box<Term>),
    Pi(PiBinder, Box<Term>),
    Let(Vec<LetBind>, Box<Term>),
    Case(Box<Term>, Vec<Alt>),
    Do(Vec<Stmt>),
    Hole(String),
    Lit(Literal),
    List(Vec<Term>),
    /// `()` for zero elements, pairs for two or more.
    Tuple(Vec<Term>),
    Type,
    World,
    Wildcard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub kind: PatternKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatternKind {
    Var(String),
    Wildcard,
    Con(String, Vec<Pattern>),
    Lit(Literal),
    Tuple(Vec<Pattern>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub pats: Vec<Pattern>,
    pub rhs: Term,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConDecl {
    pub name: String,
    pub ty: Term,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeclKind {
    Sig { names: Vec<String>, ty: Term },
    Clauses { name: String, clauses: Vec<Clause> },
    /// `data T : ty where` with constructor signatures; `cons` is `None` when
    /// the type is declared without constructors.
    Data { name: String, ty: Term, cons: Option<Vec<ConDecl>> },
    /// `data T a = C1 f .. | C2 ..`
    ShortData { name: String, params: Vec<String>, cons: Vec<(String, Vec<Term>)> },
    /// `%prim "key" name : ty`: a postulate implemented natively.
    Prim { key: String, name: String, ty: Term },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub kind: DeclKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SourceModule {
    pub name: String,
    pub imports: Vec<String>,
    pub decls: Vec<Decl>,
}

impl Term {
    pub fn new(kind: TermKind, span: Span) -> Term {
        Term { kind, span }
    }

    pub fn var(name: &str, span: Span) -> Term {
        Term::new(TermKind::Var(name.to_string()), span)
    }

    pub fn app(f: Term, a: Term) -> Term {
        let span = f.span.to(a.span);
        Term::new(TermKind::App(Box::new(f), Box::new(Arg::Explicit(a))), span)
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// Head and argument list of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Arg>) {
        let mut args = Vec::new();
        let mut t = self;
        while let TermKind::App(f, a) = &t.kind {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }
}

impl Pattern {
    pub fn new(kind: PatternKind, span: Span) -> Pattern {
        Pattern { kind, span }
    }

    /// Names bound by the pattern, left to right.
    pub fn binders(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_binders(&mut out);
        out
    }

    fn collect_binders(&self, out: &mut Vec<String>) {
        match &self.kind {
            PatternKind::Var(x) => out.push(x.clone()),
            PatternKind::Con(_, ps) | PatternKind::Tuple(ps) => {
                ps.iter().for_each(|p| p.collect_binders(out))
            }
            PatternKind::Wildcard | PatternKind::Lit(_) => {}
        }
    }
}

/// Operators with fixed precedence: `(name, precedence, associativity)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assoc {
    Left,
    Right,
    Non,
}

pub const OPERATORS: &[(&str, u8, Assoc)] = &[
    (">>=", 1, Assoc::Left),
    ("#", 2, Assoc::Non),
    ("::", 5, Assoc::Right),
    ("++", 5, Assoc::Right),
    ("+", 8, Assoc::Left),
];

pub fn operator_info(name: &str) -> Option<(u8, Assoc)> {
    OPERATORS.iter().find(|(n, _, _)| *n == name).map(|(_, p, a)| (*p, *a))
}

pub fn is_operator_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| !c.is_alphanumeric() && c != '_' && c != '\'')
}
