//! Top-level declarations.

use super::zonk::{abstract_metas, first_meta, metas_in};
use super::{Ctx, Elab, Mode, Warning};
use crate::core::*;
use crate::error::{Error, ErrorKind};
use crate::eval::Value;
use crate::multiplicity::Multiplicity;
use crate::patterns;
use crate::syntax::{autobind_implicits, desugar_decl, Decl, DeclKind, PiBinder, Plicity, Span, Term as STerm, TermKind};
use std::rc::Rc;

type R<T> = Result<T, Error>;

impl Elab {
    /// Elaborates declarations in order. A failing declaration is skipped and
    /// its error collected.
    pub fn elab_decls(&mut self, decls: &[Decl]) -> Vec<Error> {
        let mut errors = Vec::new();
        for d in decls {
            let snap = self.snapshot();
            if let Err(e) = self.elab_decl(d) {
                self.restore(snap);
                self.holes.clear();
                errors.push(e);
            }
        }
        errors
    }

    pub fn elab_decl(&mut self, d: &Decl) -> R<()> {
        let d = desugar_decl(d)?;
        let name = match &d.kind {
            DeclKind::Sig { names, ty } => {
                let t = self.elab_type(ty)?;
                for n in names {
                    let g = self.globals.add(GlobalDef { name: n.clone(), ty: Rc::new(t.clone()), kind: DefKind::Pending, module: self.module.clone() });
                    self.add_to_scope(n, g);
                }
                names.join(", ")
            }
            DeclKind::Clauses { name, clauses } => {
                self.elab_definition(name, clauses, d.span)?;
                name.clone()
            }
            DeclKind::Data { name, ty, cons } => {
                let t = self.elab_type(ty)?;
                let arity = self.pi_count(&t);
                let tc = self.add_tycon(name, t, arity);
                for c in cons.iter().flatten() {
                    self.elab_con(tc, &c.name, &c.ty, c.span)?;
                }
                name.clone()
            }
            DeclKind::ShortData { name, params, cons } => {
                let span = d.span;
                let ty = params.iter().rev().fold(STerm::new(TermKind::Type, span), |acc, p| {
                    let b = PiBinder { name: Some(p.clone()), mult: None, plicity: Plicity::Explicit, ty: Box::new(STerm::new(TermKind::Type, span)) };
                    STerm::new(TermKind::Pi(b, Box::new(acc)), span)
                });
                let t = self.elab_type(&ty)?;
                let tc = self.add_tycon(name, t, params.len());
                for (c, fields) in cons {
                    let result = STerm::apps(STerm::var(name, span), params.iter().map(|p| STerm::var(p, span)));
                    let body = fields.iter().rev().fold(result, |acc, f| {
                        let b = PiBinder { name: None, mult: None, plicity: Plicity::Explicit, ty: Box::new(f.clone()) };
                        STerm::new(TermKind::Pi(b, Box::new(acc)), span)
                    });
                    let cty = params.iter().rev().fold(body, |acc, p| {
                        let b = PiBinder {
                            name: Some(p.clone()),
                            mult: Some(Multiplicity::Zero),
                            plicity: Plicity::Implicit,
                            ty: Box::new(STerm::new(TermKind::Type, span)),
                        };
                        STerm::new(TermKind::Pi(b, Box::new(acc)), span)
                    });
                    self.elab_con(tc, c, &cty, span)?;
                }
                name.clone()
            }
            DeclKind::Prim { key, name, ty } => {
                let t = self.elab_type(ty)?;
                let arity = self.pi_count(&t);
                let g = self.globals.add(GlobalDef { name: name.clone(), ty: Rc::new(t), kind: DefKind::Prim { key: key.clone(), arity }, module: self.module.clone() });
                self.add_to_scope(name, g);
                name.clone()
            }
        };
        self.flush_holes(&name);
        Ok(())
    }

    /// Checks a signature as a type, binding its free lowercase names.
    fn elab_type(&mut self, ty: &STerm) -> R<Term> {
        let scope = &self.scope;
        let sig = autobind_implicits(ty, &|n| scope.contains_key(n));
        let mut ctx = Ctx::new();
        let (t, _) = self.check(&mut ctx, Mode::Erased, &sig, &Value::Type)?;
        let t = self.zonk(0, &t);
        let t = self.generalize(t);
        self.no_metas(&t, ty.span)?;
        Ok(t)
    }

    /// Unsolved implicit arguments with closed types become erased implicit
    /// binders in front of the signature.
    fn generalize(&self, t: Term) -> Term {
        let mut ms = Vec::new();
        metas_in(&t, &mut ms);
        let mut binders = Vec::new();
        let mut gen = Vec::new();
        for m in ms {
            let Some((name, depth, ty)) = &self.meta_info[m].implicit else { continue };
            let q = self.zonk(*depth, &self.ev().quote(*depth, ty));
            if q.well_scoped(0) && first_meta(&q).is_none() {
                let name = if name.is_empty() || name == "_" { format!("_{m}") } else { name.clone() };
                binders.push((Binder::new(&name, Multiplicity::Zero, BinderKind::Implicit), q));
                gen.push(m);
            }
        }
        if gen.is_empty() {
            return t;
        }
        let body = abstract_metas(&t, &gen, 0);
        binders.into_iter().rev().fold(body, |acc, (b, q)| Term::pi(b, q, acc))
    }

    fn no_metas(&self, t: &Term, span: Span) -> R<()> {
        match first_meta(t) {
            Some(m) => {
                let span = if self.meta_info[m].span == Span::default() { span } else { self.meta_info[m].span };
                Err(self.err(ErrorKind::UnsolvedMeta, span, format!("unsolved metavariable ?{m}")))
            }
            None => Ok(()),
        }
    }

    /// Number of Pi binders, looking through definitions.
    fn pi_count(&self, t: &Term) -> usize {
        let ev = self.ev();
        let mut v = ev.eval(&Default::default(), t);
        let mut n = 0;
        while let Value::Pi(_, _, c) = ev.whnf(v.clone()) {
            v = ev.apply_closure(&c, Value::var(n));
            n += 1;
        }
        n
    }

    fn add_tycon(&mut self, name: &str, ty: Term, arity: usize) -> GlobalId {
        let g = self.globals.add(GlobalDef { name: name.to_string(), ty: Rc::new(ty), kind: DefKind::TyCon { arity, cons: Vec::new() }, module: self.module.clone() });
        self.add_to_scope(name, g);
        g
    }

    fn elab_con(&mut self, tc: GlobalId, name: &str, ty: &STerm, span: Span) -> R<()> {
        let t = self.elab_type(ty)?;
        let ev = self.ev();
        let mut v = ev.eval(&Default::default(), &t);
        let mut mults = Vec::new();
        let mut names = Vec::new();
        while let Value::Pi(b, _, c) = ev.whnf(v.clone()) {
            v = ev.apply_closure(&c, Value::var(mults.len()));
            mults.push(b.mult);
            names.push(b.name.clone());
        }
        let DefKind::TyCon { arity, .. } = self.globals.get(tc).kind else { unreachable!() };
        let ok = matches!(ev.whnf(v).as_global_app(), Some((g, args)) if g == tc && args.len() == arity);
        if !ok {
            let tn = self.globals.name(tc).to_string();
            return Err(self.err(ErrorKind::InvalidConstructorReturnType, span, format!("{name} must construct a value of {tn}")));
        }
        let DefKind::TyCon { cons, .. } = &self.globals.get(tc).kind else { unreachable!() };
        let tag = cons.len();
        let kind = DefKind::Con { tycon: tc, tag, arity: mults.len(), field_mults: mults, field_names: names };
        let g = self.globals.add(GlobalDef { name: name.to_string(), ty: Rc::new(t), kind, module: self.module.clone() });
        if let DefKind::TyCon { cons, .. } = &mut self.globals.defs[tc].kind {
            cons.push(g);
        }
        self.add_to_scope(name, g);
        Ok(())
    }

    fn elab_definition(&mut self, name: &str, clauses: &[crate::syntax::Clause], span: Span) -> R<()> {
        let module = self.module.clone();
        let Some(g) = self.globals.defs.iter().rposition(|d| d.name == name && d.module == module && d.kind == DefKind::Pending) else {
            return Err(self.err(ErrorKind::UnknownName, span, format!("{name} has no type signature")));
        };
        let ty = self.ev().eval(&Default::default(), &self.globals.get(g).ty.clone());
        let (arity, mut core) = self.elab_clauses(name, &ty, clauses)?;
        for (c, sc) in core.iter_mut().zip(clauses) {
            let rhs = self.zonk(c.depth, &c.rhs);
            self.no_metas(&rhs, sc.rhs.span)?;
            c.rhs = Rc::new(rhs);
        }
        let (tree, missing) = patterns::compile(&self.globals, arity, &core);
        if missing {
            self.warnings.push(Warning { span, message: format!("{name} does not cover all cases") });
        }
        self.globals.defs[g].kind = DefKind::Fun { arity, tree, clauses: core };
        Ok(())
    }
}
