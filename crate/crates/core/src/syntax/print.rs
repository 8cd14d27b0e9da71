//! Surface pretty-printer. Output re-parses to the same tree: blocks are laid
//! out by indentation and anything that could extend too far is parenthesised.

use super::*;
use crate::multiplicity::{One, Zero};

const TOP: u8 = 0;
const OPERAND: u8 = 1;
const ARG: u8 = 2;

struct Printer {
    out: String,
}

impl Printer {
    fn col(&self) -> usize {
        self.out.len() - self.out.rfind('\n').map(|i| i + 1).unwrap_or(0)
    }

    fn s(&mut self, s: &str) {
        self.out.push_str(s);
    }

    fn block<T>(&mut self, items: &[T], mut f: impl FnMut(&mut Printer, &T)) {
        let col = self.col();
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                self.out.push('\n');
                self.out.push_str(&" ".repeat(col));
            }
            f(self, item);
        }
    }

    fn paren(&mut self, on: bool, f: impl FnOnce(&mut Printer)) {
        if on {
            self.s("(");
        }
        f(self);
        if on {
            self.s(")");
        }
    }

    fn name(&mut self, n: &str) {
        if is_operator_name(n) {
            self.s(&format!("({n})"));
        } else {
            self.s(n);
        }
    }

    fn term(&mut self, t: &Term, prec: u8) {
        match &t.kind {
            TermKind::Var(n) => self.name(n),
            TermKind::App(..) => {
                let (head, args) = t.spine();
                if let (TermKind::Var(op), [Arg::Explicit(l), Arg::Explicit(r)]) = (&head.kind, args.as_slice()) {
                    if is_operator_name(op) {
                        return self.paren(prec >= OPERAND, |p| {
                            p.term(l, OPERAND);
                            p.s(&format!(" {op} "));
                            p.term(r, OPERAND);
                        });
                    }
                }
                self.paren(prec >= ARG, |p| {
                    p.term(head, ARG);
                    for a in args {
                        p.s(" ");
                        match a {
                            Arg::Explicit(x) => p.term(x, ARG),
                            Arg::Named(n, x) => {
                                p.s(&format!("{{{n} = "));
                                p.term(x, TOP);
                                p.s("}");
                            }
                        }
                    }
                });
            }
            TermKind::Lam(pats, body) => self.paren(prec >= OPERAND, |p| {
                p.s("\\");
                for (i, pat) in pats.iter().enumerate() {
                    if i > 0 {
                        p.s(" ");
                    }
                    p.pattern(pat, ARG);
                }
                p.s(" => ");
                p.term(body, TOP);
            }),
            TermKind::Pi(b, body) => self.paren(prec >= OPERAND, |p| {
                p.binder(b);
                p.term(body, TOP);
            }),
            TermKind::Let(binds, body) => self.paren(prec >= OPERAND, |p| {
                p.s("let ");
                p.let_binds(binds);
                p.s(" in ");
                p.term(body, TOP);
            }),
            TermKind::Case(scrut, alts) => self.paren(prec >= OPERAND, |p| {
                p.s("case ");
                p.term(scrut, OPERAND);
                p.s(" of ");
                p.block(alts, |p, a| {
                    p.pattern(&a.pat, OPERAND);
                    p.s(" => ");
                    p.term(&a.body, OPERAND);
                });
            }),
            TermKind::Do(stmts) => self.paren(prec >= OPERAND, |p| {
                p.s("do ");
                p.block(stmts, |p, st| match st {
                    Stmt::Bind(pat, e) => {
                        p.pattern(pat, OPERAND);
                        p.s(" <- ");
                        p.term(e, OPERAND);
                    }
                    Stmt::Let(binds) => {
                        p.s("let ");
                        p.let_binds(binds);
                    }
                    Stmt::Expr(e) => p.term(e, OPERAND),
                });
            }),
            TermKind::Hole(h) => self.s(&format!("?{h}")),
            TermKind::Lit(l) => self.literal(l),
            TermKind::List(xs) => {
                self.s("[");
                self.commas(xs);
                self.s("]");
            }
            TermKind::Tuple(xs) => {
                self.s("(");
                self.commas(xs);
                self.s(")");
            }
            TermKind::Type => self.s("Type"),
            TermKind::World => self.s("%World"),
            TermKind::Wildcard => self.s("_"),
        }
    }

    fn commas(&mut self, xs: &[Term]) {
        for (i, x) in xs.iter().enumerate() {
            if i > 0 {
                self.s(", ");
            }
            self.term(x, TOP);
        }
    }

    fn let_binds(&mut self, binds: &[LetBind]) {
        self.block(binds, |p, b| {
            p.pattern(&b.pat, OPERAND);
            if let Some(ty) = &b.ty {
                p.s(" : ");
                p.term(ty, OPERAND);
            }
            p.s(" = ");
            p.term(&b.value, OPERAND);
        });
    }

    fn binder(&mut self, b: &PiBinder) {
        let mult = match b.mult {
            Some(Zero) => "0 ",
            Some(One) => "1 ",
            _ => "",
        };
        let name = b.name.as_deref().unwrap_or("_");
        match &b.plicity {
            Plicity::Explicit if b.name.is_none() && b.mult.is_none() => {
                self.term(&b.ty, OPERAND);
                self.s(" -> ");
            }
            Plicity::Auto if b.name.is_none() && b.mult.is_none() => {
                self.term(&b.ty, OPERAND);
                self.s(" => ");
            }
            Plicity::Explicit => {
                self.s(&format!("({mult}{name} : "));
                self.term(&b.ty, TOP);
                self.s(") -> ");
            }
            Plicity::Implicit => {
                self.s(&format!("{{{mult}{name} : "));
                self.term(&b.ty, TOP);
                self.s("} -> ");
            }
            Plicity::Auto => {
                self.s(&format!("{{auto {mult}{name} : "));
                self.term(&b.ty, TOP);
                self.s("} -> ");
            }
            Plicity::Default(d) => {
                self.s("{default ");
                self.term(d, ARG);
                self.s(&format!(" {mult}{name} : "));
                self.term(&b.ty, TOP);
                self.s("} -> ");
            }
        }
    }

    fn literal(&mut self, l: &Literal) {
        match l {
            Literal::Int(n) => self.s(&n.to_string()),
            Literal::Str(s) => self.s(&format!("\"{}\"", escape(s, '"'))),
            Literal::Char(c) => self.s(&format!("'{}'", escape(&c.to_string(), '\''))),
        }
    }

    fn pattern(&mut self, p: &Pattern, prec: u8) {
        match &p.kind {
            PatternKind::Var(x) => self.s(x),
            PatternKind::Wildcard => self.s("_"),
            PatternKind::Lit(l) => self.literal(l),
            PatternKind::Con(c, args) if args.is_empty() => self.name(c),
            PatternKind::Con(c, args) if is_operator_name(c) && args.len() == 2 => {
                self.paren(prec >= OPERAND, |pr| {
                    pr.pattern(&args[0], OPERAND);
                    pr.s(&format!(" {c} "));
                    pr.pattern(&args[1], OPERAND);
                })
            }
            PatternKind::Con(c, args) => self.paren(prec >= ARG, |pr| {
                pr.name(c);
                for a in args {
                    pr.s(" ");
                    pr.pattern(a, ARG);
                }
            }),
            PatternKind::Tuple(ps) => {
                self.s("(");
                for (i, x) in ps.iter().enumerate() {
                    if i > 0 {
                        self.s(", ");
                    }
                    self.pattern(x, TOP);
                }
                self.s(")");
            }
        }
    }

    fn decl(&mut self, d: &Decl) {
        match &d.kind {
            DeclKind::Sig { names, ty } => {
                for (i, n) in names.iter().enumerate() {
                    if i > 0 {
                        self.s(", ");
                    }
                    self.name(n);
                }
                self.s(" : ");
                self.term(ty, TOP);
            }
            DeclKind::Clauses { name, clauses } => {
                for (i, c) in clauses.iter().enumerate() {
                    if i > 0 {
                        self.s("\n");
                    }
                    self.name(name);
                    for pat in &c.pats {
                        self.s(" ");
                        self.pattern(pat, ARG);
                    }
                    self.s(" = ");
                    self.term(&c.rhs, TOP);
                }
            }
            DeclKind::Data { name, ty, cons } => {
                self.s("data ");
                self.name(name);
                self.s(" : ");
                self.term(ty, TOP);
                if let Some(cons) = cons {
                    self.s(" where");
                    for c in cons {
                        self.s("\n     ");
                        self.name(&c.name);
                        self.s(" : ");
                        self.term(&c.ty, TOP);
                    }
                }
            }
            DeclKind::ShortData { name, params, cons } => {
                self.s("data ");
                self.name(name);
                for p in params {
                    self.s(&format!(" {p}"));
                }
                self.s(" =");
                for (i, (c, fields)) in cons.iter().enumerate() {
                    if i > 0 {
                        self.s(" |");
                    }
                    self.s(" ");
                    self.name(c);
                    for f in fields {
                        self.s(" ");
                        self.term(f, ARG);
                    }
                }
            }
            DeclKind::Prim { key, name, ty } => {
                self.s(&format!("%prim \"{}\" ", escape(key, '"')));
                self.name(name);
                self.s(" : ");
                self.term(ty, TOP);
            }
        }
    }
}

fn escape(s: &str, quote: char) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\\' => out.push_str("\\\\"),
            '\0' => out.push_str("\\0"),
            c if c == quote => {
                out.push('\\');
                out.push(c);
            }
            c => out.push(c),
        }
    }
    out
}

pub fn print_term(t: &Term) -> String {
    let mut p = Printer { out: String::new() };
    p.term(t, TOP);
    p.out
}

pub fn print_decl(d: &Decl) -> String {
    let mut p = Printer { out: String::new() };
    p.decl(d);
    p.out
}

pub fn print_module(m: &SourceModule) -> String {
    let mut out = String::new();
    for i in &m.imports {
        out.push_str(&format!("import {i}\n"));
    }
    for d in &m.decls {
        out.push('\n');
        out.push_str(&print_decl(d));
        out.push('\n');
    }
    out
}
