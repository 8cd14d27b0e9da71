//! Layout-sensitive recursive-descent parser for `.qtt` sources and REPL input.
//!
//! Layout: every construct is parsed under a column limit. A token that starts
//! a line at or left of the limit is invisible, which ends the construct.

pub mod lexer;

use crate::error::{Error, ErrorKind};
use crate::multiplicity::{One, Zero};
use crate::syntax::*;
use lexer::{lex, Tok, Token};

#[derive(Debug, Clone, PartialEq)]
pub enum ReplCommand {
    TypeOf(Term),
    Eval(Term),
    Load(String),
    Exec(String),
    Holes,
    Quit,
}

pub fn parse_module(text: &str, name: &str) -> Result<SourceModule, Error> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks);
    let mut module = SourceModule { name: name.to_string(), ..SourceModule::default() };
    while let Some(t) = p.toks.get(p.pos) {
        if !t.line_start {
            return Err(p.unexpected("the start of a declaration"));
        }
        p.limits.push((t.span.col, p.pos));
        if matches!(t.tok, Tok::Keyword("import")) {
            p.pos += 1;
            let (n, _) = p.ident()?;
            module.imports.push(n);
        } else {
            let d = p.decl()?;
            push_decl(&mut module.decls, d);
        }
        p.limits.pop();
        if let Some(t) = p.toks.get(p.pos) {
            if !t.line_start {
                return Err(p.unexpected("the end of the declaration"));
            }
        }
    }
    Ok(module)
}

/// Consecutive clauses for the same name form one declaration.
fn push_decl(decls: &mut Vec<Decl>, d: Decl) {
    if let DeclKind::Clauses { name, clauses } = &d.kind {
        if let Some(Decl { kind: DeclKind::Clauses { name: prev, clauses: cs }, span }) = decls.last_mut() {
            if prev == name {
                cs.extend(clauses.iter().cloned());
                *span = span.to(d.span);
                return;
            }
        }
    }
    decls.push(d);
}

pub fn parse_term(text: &str) -> Result<Term, Error> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks);
    let t = p.expr()?;
    p.expect_end()?;
    Ok(t)
}

pub fn parse_repl_input(text: &str) -> Result<ReplCommand, Error> {
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix(':') {
        let (cmd, arg) = match rest.find(char::is_whitespace) {
            Some(i) => (&rest[..i], rest[i..].trim()),
            None => (rest, ""),
        };
        let need_arg = |what: &str| -> Result<String, Error> {
            if arg.is_empty() {
                Err(Error::new(ErrorKind::SyntaxError, Span::new(1, 1, 1, 1), format!(":{cmd} expects {what}")))
            } else {
                Ok(arg.to_string())
            }
        };
        return match cmd {
            "t" | "type" => Ok(ReplCommand::TypeOf(parse_term(&need_arg("a term")?)?)),
            "holes" => Ok(ReplCommand::Holes),
            "l" | "load" => Ok(ReplCommand::Load(need_arg("a path")?)),
            "exec" => Ok(ReplCommand::Exec(need_arg("a name")?)),
            "q" | "quit" => Ok(ReplCommand::Quit),
            _ => Err(Error::new(
                ErrorKind::SyntaxError,
                Span::new(1, 1, 1, 1),
                format!("unknown command :{cmd}; expected one of :t :holes :load :exec :q"),
            )),
        };
    }
    Ok(ReplCommand::Eval(parse_term(trimmed)?))
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    /// Column limit and the index of the token that opened the item.
    limits: Vec<(u32, usize)>,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token]) -> Parser<'a> {
        Parser { toks, pos: 0, limits: vec![(0, usize::MAX)] }
    }

    fn limit(&self) -> u32 {
        self.limits.last().unwrap().0
    }

    fn peek_at(&self, i: usize) -> Option<&'a Token> {
        let t = self.toks.get(i)?;
        if i == self.pos && t.line_start && t.span.col <= self.limit() && i != self.limits.last().unwrap().1 {
            return None;
        }
        Some(t)
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.peek_at(self.pos).map(|t| &t.tok)
    }

    fn nth(&self, n: usize) -> Option<&'a Tok> {
        self.peek()?;
        self.toks.get(self.pos + n).map(|t| &t.tok)
    }

    fn span(&self) -> Span {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => t.span,
            None => Span::new(1, 1, 1, 1),
        }
    }

    fn prev_span(&self) -> Span {
        self.toks.get(self.pos.saturating_sub(1)).map(|t| t.span).unwrap_or_default()
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Tok::Keyword(q)) if *q == k)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        let hit = self.is_punct(p);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), Error> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{p}`")))
        }
    }

    fn expect_kw(&mut self, k: &str) -> Result<(), Error> {
        if self.is_kw(k) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{k}`")))
        }
    }

    fn expect_end(&self) -> Result<(), Error> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }

    fn unexpected(&self, expected: &str) -> Error {
        let (found, span) = match self.toks.get(self.pos) {
            Some(t) => (describe(&t.tok), t.span),
            None => ("end of input".to_string(), self.span()),
        };
        Error::new(ErrorKind::SyntaxError, span, format!("unexpected {found}; expected {expected}"))
    }

    fn ident(&mut self) -> Result<(String, Span), Error> {
        match self.peek() {
            Some(Tok::Ident(n)) => {
                self.pos += 1;
                Ok((n.clone(), self.prev_span()))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    /// An identifier or a parenthesised operator such as `(::)`.
    fn def_name(&mut self) -> Result<String, Error> {
        if let (Some(Tok::Punct("(")), Some(Tok::Op(op)), Some(Tok::Punct(")"))) =
            (self.peek(), self.nth(1), self.nth(2))
        {
            self.pos += 3;
            return Ok(op.clone());
        }
        Ok(self.ident()?.0)
    }

    /// Parses items laid out at a common column, or separated by `;`.
    fn block<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, Error>) -> Result<Vec<T>, Error> {
        let Some(first) = self.peek_at(self.pos) else { return Ok(Vec::new()) };
        let col = first.span.col;
        let outer = self.limit();
        let mut out = Vec::new();
        loop {
            self.limits.push((col, self.pos));
            let r = item(self);
            self.limits.pop();
            out.push(r?);
            if self.eat_punct(";") {
                if self.peek().is_some() {
                    continue;
                }
                break;
            }
            match self.toks.get(self.pos) {
                Some(t) if t.line_start && t.span.col == col && col > outer => continue,
                _ => break,
            }
        }
        Ok(out)
    }

    // ---- declarations ----

    fn decl(&mut self) -> Result<Decl, Error> {
        let start = self.span();
        let kind = match self.peek() {
            Some(Tok::Keyword("data")) => self.data_decl()?,
            Some(Tok::PrimPragma) => {
                self.pos += 1;
                let key = match self.peek() {
                    Some(Tok::Str(s)) => s.clone(),
                    _ => return Err(self.unexpected("a primitive name string")),
                };
                self.pos += 1;
                let name = self.def_name()?;
                self.expect_punct(":")?;
                DeclKind::Prim { key, name, ty: self.expr()? }
            }
            _ if self.at_signature() => {
                let mut names = vec![self.def_name()?];
                while self.eat_punct(",") {
                    names.push(self.def_name()?);
                }
                self.expect_punct(":")?;
                DeclKind::Sig { names, ty: self.expr()? }
            }
            _ => {
                let lhs = self.op_expr()?;
                self.expect_punct("=")?;
                let rhs = self.expr()?;
                let (head, args) = lhs.spine();
                let name = match &head.kind {
                    TermKind::Var(n) => n.clone(),
                    _ => return Err(Error::new(ErrorKind::SyntaxError, head.span, "expected a function name on the left of `=`".into())),
                };
                let pats = args
                    .into_iter()
                    .map(|a| match a {
                        Arg::Explicit(t) => term_to_pattern(t),
                        Arg::Named(_, t) => Err(Error::new(ErrorKind::InvalidPattern, t.span, "named arguments are not allowed in patterns".into())),
                    })
                    .collect::<Result<_, _>>()?;
                let span = lhs.span.to(rhs.span);
                DeclKind::Clauses { name, clauses: vec![Clause { pats, rhs, span }] }
            }
        };
        Ok(Decl { kind, span: start.to(self.prev_span()) })
    }

    fn at_signature(&self) -> bool {
        let mut i = self.pos;
        loop {
            match self.toks.get(i).map(|t| &t.tok) {
                Some(Tok::Ident(_)) => i += 1,
                Some(Tok::Punct("(")) => {
                    match (self.toks.get(i + 1).map(|t| &t.tok), self.toks.get(i + 2).map(|t| &t.tok)) {
                        (Some(Tok::Op(_)), Some(Tok::Punct(")"))) => i += 3,
                        _ => return false,
                    }
                }
                _ => return false,
            }
            match self.toks.get(i).map(|t| &t.tok) {
                Some(Tok::Punct(":")) => return true,
                Some(Tok::Punct(",")) => i += 1,
                _ => return false,
            }
        }
    }

    fn data_decl(&mut self) -> Result<DeclKind, Error> {
        self.expect_kw("data")?;
        let name = self.def_name()?;
        if self.eat_punct(":") {
            let ty = self.expr()?;
            if !self.is_kw("where") {
                return Ok(DeclKind::Data { name, ty, cons: None });
            }
            self.pos += 1;
            let groups = self.block(|p| {
                let start = p.span();
                let mut names = vec![p.def_name()?];
                while p.eat_punct(",") {
                    names.push(p.def_name()?);
                }
                p.expect_punct(":")?;
                let ty = p.expr()?;
                let span = start.to(p.prev_span());
                Ok(names.into_iter().map(|n| ConDecl { name: n, ty: ty.clone(), span }).collect::<Vec<_>>())
            })?;
            return Ok(DeclKind::Data { name, ty, cons: Some(groups.into_iter().flatten().collect()) });
        }
        let mut params = Vec::new();
        while let Some(Tok::Ident(p)) = self.peek() {
            params.push(p.clone());
            self.pos += 1;
        }
        self.expect_punct("=")?;
        let mut cons = Vec::new();
        loop {
            let c = self.def_name()?;
            let mut fields = Vec::new();
            while self.at_atom() {
                fields.push(self.atom()?);
            }
            cons.push((c, fields));
            if !self.eat_punct("|") {
                break;
            }
        }
        Ok(DeclKind::ShortData { name, params, cons })
    }

    // ---- terms ----

    pub fn expr(&mut self) -> Result<Term, Error> {
        let start = self.span();
        if let Some(binders) = self.try_binder_group()? {
            if !self.eat_punct("->") {
                return Err(self.unexpected("`->` after a binder"));
            }
            let body = self.expr()?;
            let span = start.to(body.span);
            return Ok(binders.into_iter().rev().fold(body, |acc, b| Term::new(TermKind::Pi(b, Box::new(acc)), span)));
        }
        let lhs = self.op_expr()?;
        let plicity = if self.eat_punct("->") {
            Plicity::Explicit
        } else if self.eat_punct("=>") {
            Plicity::Auto
        } else {
            return Ok(lhs);
        };
        let body = self.expr()?;
        let span = start.to(body.span);
        let binder = PiBinder { name: None, mult: None, plicity, ty: Box::new(lhs) };
        Ok(Term::new(TermKind::Pi(binder, Box::new(body)), span))
    }

    /// `(x : A)`, `(0 x, y : A)`, `{1 x : A}`, `{auto p : T}`, `{default d x : T}`.
    fn try_binder_group(&mut self) -> Result<Option<Vec<PiBinder>>, Error> {
        let (close, implicit) = match self.peek() {
            Some(Tok::Punct("(")) => (")", false),
            Some(Tok::Punct("{")) => ("}", true),
            _ => return Ok(None),
        };
        let save = self.pos;
        self.pos += 1;
        let mut plicity = if implicit { Plicity::Implicit } else { Plicity::Explicit };
        if implicit && self.is_kw("auto") {
            self.pos += 1;
            plicity = Plicity::Auto;
        } else if implicit && self.is_kw("default") {
            self.pos += 1;
            plicity = Plicity::Default(Box::new(self.atom()?));
        }
        let mult = match self.peek() {
            Some(Tok::Int(0)) => Some(Zero),
            Some(Tok::Int(1)) => Some(One),
            _ => None,
        };
        if mult.is_some() {
            self.pos += 1;
        }
        let mut names = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Ident(n)) => names.push(Some(n.clone())),
                Some(Tok::Punct("_")) => names.push(None),
                _ => {
                    self.pos = save;
                    return Ok(None);
                }
            }
            self.pos += 1;
            if !self.eat_punct(",") {
                break;
            }
        }
        if !self.eat_punct(":") {
            self.pos = save;
            return Ok(None);
        }
        let ty = self.expr()?;
        self.expect_punct(close)?;
        Ok(Some(
            names
                .into_iter()
                .map(|name| PiBinder { name, mult, plicity: plicity.clone(), ty: Box::new(ty.clone()) })
                .collect(),
        ))
    }

    fn op_expr(&mut self) -> Result<Term, Error> {
        self.op_prec(0)
    }

    fn peek_op(&self) -> Option<(String, u8, Assoc)> {
        match self.peek() {
            Some(Tok::Op(o)) => {
                let (p, a) = operator_info(o).unwrap_or((9, Assoc::Left));
                Some((o.clone(), p, a))
            }
            _ => None,
        }
    }

    fn op_prec(&mut self, min: u8) -> Result<Term, Error> {
        let mut lhs = self.app()?;
        while let Some((op, prec, assoc)) = self.peek_op() {
            if prec < min {
                break;
            }
            let span = self.span();
            self.pos += 1;
            let next = match assoc {
                Assoc::Left | Assoc::Non => prec + 1,
                Assoc::Right => prec,
            };
            let rhs = self.op_prec(next)?;
            lhs = Term::apps(Term::var(&op, span), [lhs, rhs]);
            if assoc == Assoc::Non {
                if let Some((_, p2, _)) = self.peek_op() {
                    if p2 == prec {
                        return Err(self.unexpected("no further non-associative operator"));
                    }
                }
            }
        }
        Ok(lhs)
    }

    fn app(&mut self) -> Result<Term, Error> {
        let mut f = self.atom()?;
        loop {
            if self.at_named_arg() {
                let start = self.span();
                self.pos += 1;
                let (name, nspan) = self.ident()?;
                let val = if self.eat_punct("=") { self.expr()? } else { Term::var(&name, nspan) };
                self.expect_punct("}")?;
                let span = f.span.to(start.to(self.prev_span()));
                f = Term::new(TermKind::App(Box::new(f), Box::new(Arg::Named(name, val))), span);
            } else if self.at_atom() {
                let a = self.atom()?;
                f = Term::app(f, a);
            } else {
                return Ok(f);
            }
        }
    }

    fn at_named_arg(&self) -> bool {
        self.is_punct("{")
            && matches!(self.nth(1), Some(Tok::Ident(_)))
            && matches!(self.nth(2), Some(Tok::Punct("=")) | Some(Tok::Punct("}")))
    }

    fn at_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(_) | Tok::Int(_) | Tok::Str(_) | Tok::Char(_) | Tok::Hole(_) | Tok::World) => true,
            Some(Tok::Punct(p)) => matches!(*p, "(" | "[" | "_" | "\\"),
            Some(Tok::Keyword(k)) => matches!(*k, "Type" | "do" | "case" | "let"),
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<Term, Error> {
        let start = self.span();
        let Some(tok) = self.peek() else { return Err(self.unexpected("an expression")) };
        let kind = match tok {
            Tok::Ident(n) => {
                self.pos += 1;
                TermKind::Var(n.clone())
            }
            Tok::Int(n) => {
                self.pos += 1;
                TermKind::Lit(Literal::Int(*n))
            }
            Tok::Str(s) => {
                self.pos += 1;
                TermKind::Lit(Literal::Str(s.clone()))
            }
            Tok::Char(c) => {
                self.pos += 1;
                TermKind::Lit(Literal::Char(*c))
            }
            Tok::Hole(h) => {
                self.pos += 1;
                TermKind::Hole(h.clone())
            }
            Tok::World => {
                self.pos += 1;
                TermKind::World
            }
            Tok::Keyword("Type") => {
                self.pos += 1;
                TermKind::Type
            }
            Tok::Punct("_") => {
                self.pos += 1;
                TermKind::Wildcard
            }
            Tok::Punct("\\") => return self.lambda(),
            Tok::Keyword("do") => {
                self.pos += 1;
                let stmts = self.block(|p| p.stmt())?;
                if stmts.is_empty() {
                    return Err(Error::new(ErrorKind::EmptyDoBlock, start, "a do block must end with an expression".into()));
                }
                TermKind::Do(stmts)
            }
            Tok::Keyword("case") => {
                self.pos += 1;
                let scrut = self.expr()?;
                self.expect_kw("of")?;
                let alts = self.block(|p| {
                    let pat = term_to_pattern(&p.op_expr()?)?;
                    p.expect_punct("=>")?;
                    Ok(Alt { pat, body: p.expr()? })
                })?;
                TermKind::Case(Box::new(scrut), alts)
            }
            Tok::Keyword("let") => {
                self.pos += 1;
                let binds = self.let_binds()?;
                self.expect_kw("in")?;
                let body = self.expr()?;
                TermKind::Let(binds, Box::new(body))
            }
            Tok::Punct("[") => {
                self.pos += 1;
                let mut items = Vec::new();
                if !self.eat_punct("]") {
                    loop {
                        items.push(self.expr()?);
                        if self.eat_punct("]") {
                            break;
                        }
                        self.expect_punct(",")?;
                    }
                }
                TermKind::List(items)
            }
            Tok::Punct("(") => {
                self.pos += 1;
                if self.eat_punct(")") {
                    TermKind::Tuple(Vec::new())
                } else if let (Some(Tok::Op(op)), Some(Tok::Punct(")"))) = (self.peek(), self.nth(1)) {
                    self.pos += 2;
                    TermKind::Var(op.clone())
                } else {
                    let mut items = vec![self.expr()?];
                    while self.eat_punct(",") {
                        items.push(self.expr()?);
                    }
                    self.expect_punct(")")?;
                    if items.len() == 1 {
                        let mut t = items.pop().unwrap();
                        t.span = start.to(self.prev_span());
                        return Ok(t);
                    }
                    TermKind::Tuple(items)
                }
            }
            _ => return Err(self.unexpected("an expression")),
        };
        Ok(Term::new(kind, start.to(self.prev_span())))
    }

    fn lambda(&mut self) -> Result<Term, Error> {
        let start = self.span();
        self.expect_punct("\\")?;
        let mut pats = Vec::new();
        loop {
            let a = self.atom()?;
            pats.push(term_to_pattern(&a)?);
            self.eat_punct(",");
            if self.is_punct("=>") {
                break;
            }
        }
        self.expect_punct("=>")?;
        let body = self.expr()?;
        let span = start.to(body.span);
        Ok(Term::new(TermKind::Lam(pats, Box::new(body)), span))
    }

    fn let_binds(&mut self) -> Result<Vec<LetBind>, Error> {
        self.block(|p| {
            let pat = term_to_pattern(&p.op_expr()?)?;
            let ty = if p.eat_punct(":") { Some(p.expr()?) } else { None };
            p.expect_punct("=")?;
            Ok(LetBind { pat, ty, value: p.expr()? })
        })
    }

    fn stmt(&mut self) -> Result<Stmt, Error> {
        if self.is_kw("let") {
            let start = self.span();
            self.pos += 1;
            let binds = self.let_binds()?;
            if self.is_kw("in") {
                self.pos += 1;
                let body = self.expr()?;
                let span = start.to(body.span);
                return Ok(Stmt::Expr(Term::new(TermKind::Let(binds, Box::new(body)), span)));
            }
            return Ok(Stmt::Let(binds));
        }
        let e = self.expr()?;
        if self.eat_punct("<-") {
            let pat = term_to_pattern(&e)?;
            return Ok(Stmt::Bind(pat, self.expr()?));
        }
        Ok(Stmt::Expr(e))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(n) => format!("identifier `{n}`"),
        Tok::Op(o) => format!("operator `{o}`"),
        Tok::Int(n) => format!("integer {n}"),
        Tok::Str(s) => format!("string {s:?}"),
        Tok::Char(c) => format!("character {c:?}"),
        Tok::Hole(h) => format!("hole ?{h}"),
        Tok::Keyword(k) => format!("keyword `{k}`"),
        Tok::Punct(p) => format!("`{p}`"),
        Tok::World => "`%World`".into(),
        Tok::PrimPragma => "`%prim`".into(),
    }
}

fn is_con_name(n: &str) -> bool {
    n.chars().next().is_some_and(|c| c.is_uppercase()) || is_operator_name(n)
}

/// Reinterprets an expression as a pattern: capitalised names and operators
/// are constructors, other names bind variables.
pub fn term_to_pattern(t: &Term) -> Result<Pattern, Error> {
    let bad = |t: &Term| Error::new(ErrorKind::InvalidPattern, t.span, "this expression is not a valid pattern".into());
    let kind = match &t.kind {
        TermKind::Var(n) if is_con_name(n) => PatternKind::Con(n.clone(), Vec::new()),
        TermKind::Var(n) => PatternKind::Var(n.clone()),
        TermKind::Wildcard => PatternKind::Wildcard,
        TermKind::Lit(l) => PatternKind::Lit(l.clone()),
        TermKind::Tuple(xs) => PatternKind::Tuple(xs.iter().map(term_to_pattern).collect::<Result<_, _>>()?),
        TermKind::List(xs) => {
            let nil = Pattern::new(PatternKind::Con("Nil".into(), Vec::new()), t.span);
            return xs.iter().rev().try_fold(nil, |acc, x| {
                Ok(Pattern::new(PatternKind::Con("::".into(), vec![term_to_pattern(x)?, acc]), t.span))
            });
        }
        TermKind::App(..) => {
            let (head, args) = t.spine();
            match &head.kind {
                TermKind::Var(c) if is_con_name(c) => PatternKind::Con(
                    c.clone(),
                    args.into_iter()
                        .map(|a| match a {
                            Arg::Explicit(x) => term_to_pattern(x),
                            Arg::Named(_, x) => Err(bad(x)),
                        })
                        .collect::<Result<_, _>>()?,
                ),
                _ => return Err(bad(t)),
            }
        }
        _ => return Err(bad(t)),
    };
    Ok(Pattern::new(kind, t.span))
}

#[cfg(test)]
mod tests;
