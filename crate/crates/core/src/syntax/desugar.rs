//! Purely syntactic passes: `do` blocks, list and integer literals, and
//! auto-binding of free lowercase names in signatures.

use super::*;
use crate::error::{Error, ErrorKind};
use crate::multiplicity::Zero;
use std::collections::HashSet;

/// Translates a `do` block into nested applications of `>>=`. The name is
/// resolved later, so any bind in scope works.
pub fn desugar_do(stmts: &[Stmt], span: Span) -> Result<Term, Error> {
    let (last, init) = match stmts.split_last() {
        Some((Stmt::Expr(e), init)) => (e.clone(), init),
        _ => {
            return Err(Error::new(
                ErrorKind::EmptyDoBlock,
                span,
                "a do block must end with an expression".to_string(),
            ))
        }
    };
    let mut acc = last;
    for stmt in init.iter().rev() {
        acc = match stmt {
            Stmt::Bind(pat, e) => bind(e.clone(), pat.clone(), acc),
            Stmt::Expr(e) => {
                let wild = Pattern::new(PatternKind::Wildcard, e.span);
                bind(e.clone(), wild, acc)
            }
            Stmt::Let(binds) => {
                let span = binds.first().map(|b| b.value.span).unwrap_or(span).to(acc.span);
                Term::new(TermKind::Let(binds.clone(), Box::new(acc)), span)
            }
        };
    }
    Ok(acc)
}

fn bind(action: Term, pat: Pattern, rest: Term) -> Term {
    let span = action.span.to(rest.span);
    let op = Term::var(">>=", action.span);
    let k = Term::new(TermKind::Lam(vec![pat], Box::new(rest)), span);
    Term::apps(op, [action, k])
}

/// List literals become `::`/`Nil` chains, integer literals `fromInteger n`.
pub fn desugar_literals(t: &Term) -> Term {
    map_term(t, &mut |t| match &t.kind {
        TermKind::List(items) => {
            let nil = Term::var("Nil", t.span);
            Some(items.iter().rev().fold(nil, |acc, x| {
                Term::apps(Term::var("::", x.span), [desugar_literals(x), acc])
            }))
        }
        TermKind::Lit(Literal::Int(_)) => {
            Some(Term::app(Term::var("fromInteger", t.span), t.clone()))
        }
        TermKind::App(f, a) => match (&f.kind, &**a) {
            (TermKind::Var(n), Arg::Explicit(x))
                if n == "fromInteger" && matches!(x.kind, TermKind::Lit(Literal::Int(_))) =>
            {
                Some(t.clone())
            }
            _ => None,
        },
        _ => None,
    })
}

/// Applies both `do` and literal desugaring everywhere in a term.
pub fn desugar_term(t: &Term) -> Result<Term, Error> {
    let mut err = None;
    let out = map_term(t, &mut |t| match &t.kind {
        TermKind::Do(stmts) => match desugar_do(stmts, t.span) {
            Ok(d) => match desugar_term(&d) {
                Ok(d) => Some(d),
                Err(e) => {
                    err.get_or_insert(e);
                    Some(t.clone())
                }
            },
            Err(e) => {
                err.get_or_insert(e);
                Some(t.clone())
            }
        },
        _ => None,
    });
    match err {
        Some(e) => Err(e),
        None => Ok(desugar_literals(&out)),
    }
}

pub fn desugar_decl(d: &Decl) -> Result<Decl, Error> {
    let kind = match &d.kind {
        DeclKind::Sig { names, ty } => DeclKind::Sig { names: names.clone(), ty: desugar_term(ty)? },
        DeclKind::Clauses { name, clauses } => DeclKind::Clauses {
            name: name.clone(),
            clauses: clauses
                .iter()
                .map(|c| {
                    Ok(Clause { pats: c.pats.clone(), rhs: desugar_term(&c.rhs)?, span: c.span })
                })
                .collect::<Result<_, Error>>()?,
        },
        DeclKind::Data { name, ty, cons } => DeclKind::Data {
            name: name.clone(),
            ty: desugar_term(ty)?,
            cons: match cons {
                Some(cs) => Some(
                    cs.iter()
                        .map(|c| Ok(ConDecl { name: c.name.clone(), ty: desugar_term(&c.ty)?, span: c.span }))
                        .collect::<Result<_, Error>>()?,
                ),
                None => None,
            },
        },
        DeclKind::ShortData { name, params, cons } => DeclKind::ShortData {
            name: name.clone(),
            params: params.clone(),
            cons: cons
                .iter()
                .map(|(c, fs)| Ok((c.clone(), fs.iter().map(desugar_term).collect::<Result<_, Error>>()?)))
                .collect::<Result<_, Error>>()?,
        },
        DeclKind::Prim { key, name, ty } => {
            DeclKind::Prim { key: key.clone(), name: name.clone(), ty: desugar_term(ty)? }
        }
    };
    Ok(Decl { kind, span: d.span })
}

/// Wraps every free lowercase name of a signature in an outer erased implicit
/// binder, in first-use order. Names for which `is_global` holds are left alone.
pub fn autobind_implicits(sig: &Term, is_global: &dyn Fn(&str) -> bool) -> Term {
    let mut free = Vec::new();
    let mut bound = Vec::new();
    collect_free(sig, &mut bound, &mut free);
    let mut seen = HashSet::new();
    let free: Vec<String> = free
        .into_iter()
        .filter(|n| is_lower_ident(n) && !is_global(n) && seen.insert(n.clone()))
        .collect();
    free.into_iter().rev().fold(sig.clone(), |acc, name| {
        let span = acc.span;
        let binder = PiBinder {
            name: Some(name),
            mult: Some(Zero),
            plicity: Plicity::Implicit,
            ty: Box::new(Term::new(TermKind::Wildcard, span)),
        };
        Term::new(TermKind::Pi(binder, Box::new(acc)), span)
    })
}

pub(crate) fn is_lower_ident(n: &str) -> bool {
    n.chars().next().is_some_and(|c| c.is_ascii_lowercase())
}

fn collect_free(t: &Term, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match &t.kind {
        TermKind::Var(x) => {
            if !bound.contains(x) {
                out.push(x.clone());
            }
        }
        TermKind::App(f, a) => {
            collect_free(f, bound, out);
            match &**a {
                Arg::Explicit(x) | Arg::Named(_, x) => collect_free(x, bound, out),
            }
        }
        TermKind::Lam(pats, body) => {
            let n = bound.len();
            pats.iter().for_each(|p| bound.extend(p.binders()));
            collect_free(body, bound, out);
            bound.truncate(n);
        }
        TermKind::Pi(b, body) => {
            collect_free(&b.ty, bound, out);
            if let Plicity::Default(d) = &b.plicity {
                collect_free(d, bound, out);
            }
            let n = bound.len();
            bound.extend(b.name.clone());
            collect_free(body, bound, out);
            bound.truncate(n);
        }
        TermKind::Let(binds, body) => {
            let n = bound.len();
            for b in binds {
                if let Some(ty) = &b.ty {
                    collect_free(ty, bound, out);
                }
                collect_free(&b.value, bound, out);
                bound.extend(b.pat.binders());
            }
            collect_free(body, bound, out);
            bound.truncate(n);
        }
        TermKind::Case(s, alts) => {
            collect_free(s, bound, out);
            for a in alts {
                let n = bound.len();
                bound.extend(a.pat.binders());
                collect_free(&a.body, bound, out);
                bound.truncate(n);
            }
        }
        TermKind::Do(stmts) => {
            let n = bound.len();
            for s in stmts {
                match s {
                    Stmt::Bind(p, e) => {
                        collect_free(e, bound, out);
                        bound.extend(p.binders());
                    }
                    Stmt::Expr(e) => collect_free(e, bound, out),
                    Stmt::Let(binds) => {
                        for b in binds {
                            collect_free(&b.value, bound, out);
                            bound.extend(b.pat.binders());
                        }
                    }
                }
            }
            bound.truncate(n);
        }
        TermKind::List(xs) | TermKind::Tuple(xs) => xs.iter().for_each(|x| collect_free(x, bound, out)),
        TermKind::Hole(_)
        | TermKind::Lit(_)
        | TermKind::Type
        | TermKind::World
        | TermKind::Wildcard => {}
    }
}

/// Bottom-up-free rewriting helper: `f` may replace a node outright; otherwise
/// the children are rewritten.
fn map_term(t: &Term, f: &mut dyn FnMut(&Term) -> Option<Term>) -> Term {
    if let Some(r) = f(t) {
        return r;
    }
    let kind = match &t.kind {
        TermKind::App(g, a) => TermKind::App(
            Box::new(map_term(g, f)),
            Box::new(match &**a {
                Arg::Explicit(x) => Arg::Explicit(map_term(x, f)),
                Arg::Named(n, x) => Arg::Named(n.clone(), map_term(x, f)),
            }),
        ),
        TermKind::Lam(ps, b) => TermKind::Lam(ps.clone(), Box::new(map_term(b, f))),
        TermKind::Pi(b, body) => TermKind::Pi(
            PiBinder {
                name: b.name.clone(),
                mult: b.mult,
                plicity: match &b.plicity {
                    Plicity::Default(d) => Plicity::Default(Box::new(map_term(d, f))),
                    p => p.clone(),
                },
                ty: Box::new(map_term(&b.ty, f)),
            },
            Box::new(map_term(body, f)),
        ),
        TermKind::Let(binds, body) => TermKind::Let(
            binds
                .iter()
                .map(|b| LetBind {
                    pat: b.pat.clone(),
                    ty: b.ty.as_ref().map(|t| map_term(t, f)),
                    value: map_term(&b.value, f),
                })
                .collect(),
            Box::new(map_term(body, f)),
        ),
        TermKind::Case(s, alts) => TermKind::Case(
            Box::new(map_term(s, f)),
            alts.iter().map(|a| Alt { pat: a.pat.clone(), body: map_term(&a.body, f) }).collect(),
        ),
        TermKind::Do(stmts) => TermKind::Do(
            stmts
                .iter()
                .map(|s| match s {
                    Stmt::Bind(p, e) => Stmt::Bind(p.clone(), map_term(e, f)),
                    Stmt::Expr(e) => Stmt::Expr(map_term(e, f)),
                    Stmt::Let(bs) => Stmt::Let(
                        bs.iter()
                            .map(|b| LetBind {
                                pat: b.pat.clone(),
                                ty: b.ty.as_ref().map(|t| map_term(t, f)),
                                value: map_term(&b.value, f),
                            })
                            .collect(),
                    ),
                })
                .collect(),
        ),
        TermKind::List(xs) => TermKind::List(xs.iter().map(|x| map_term(x, f)).collect()),
        TermKind::Tuple(xs) => TermKind::Tuple(xs.iter().map(|x| map_term(x, f)).collect()),
        k => k.clone(),
    };
    Term::new(kind, t.span)
}
