//! Holes and their reports.

use super::{Ctx, Elab, Mode, Usage};
use crate::core::*;
use crate::multiplicity::Multiplicity;
use crate::eval::Value;
use crate::syntax::Span;
use std::rc::Rc;

#[derive(Debug, Clone)]
pub struct HoleInfo {
    pub name: String,
    pub gid: GlobalId,
    pub ctx: Ctx,
    pub goal: Value,
    /// Usage already spent by the rest of the definition.
    pub other: Usage,
    pub mode: Mode,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleReport {
    pub name: String,
    /// Declaration the hole occurs in.
    pub decl: String,
    pub text: String,
}

impl Elab {
    /// Registers a hole and returns the term standing for it: the hole's
    /// global applied to every bound variable at multiplicity zero.
    pub(crate) fn new_hole(&mut self, ctx: &Ctx, mode: Mode, name: &str, goal: Value, span: Span) -> Term {
        let mut unique = name.to_string();
        let mut k = 0;
        while self.globals.find(&unique, |d| matches!(d, DefKind::Hole)).is_some() {
            k += 1;
            unique = format!("{name}_{k}");
        }
        let gid = self.globals.add(GlobalDef { name: unique.clone(), ty: Rc::new(Term::Type), kind: DefKind::Hole, module: self.module.clone() });
        self.holes.push(HoleInfo { name: unique, gid, ctx: ctx.clone(), goal, other: Usage::new(), mode, span });
        let n = ctx.len();
        (0..n)
            .filter(|l| ctx.entries[*l].bound)
            .fold(Term::Global(gid), |t, l| Term::app(t, Term::Var(n - 1 - l), Multiplicity::Zero, Icit::Implicit))
    }

    /// Context lines, a rule, then the goal. Each variable shows what is left
    /// of its multiplicity after the uses elsewhere in the definition.
    pub fn render_hole(&self, h: &HoleInfo) -> String {
        let ev = self.ev();
        let ctx = &h.ctx;
        let names = ctx.names();
        let mut out = String::new();
        // Pattern fields are listed where the argument they came from was.
        let root = |mut l: usize| {
            while let Some(o) = ctx.entries[l].origin {
                l = o;
            }
            l
        };
        let mut order: Vec<usize> = (0..ctx.len()).collect();
        order.sort_by_key(|&l| root(l));
        for l in order {
            let e = &ctx.entries[l];
            if e.hidden || e.refined || ctx.entries[l + 1..].iter().any(|o| o.name == e.name && !o.hidden) {
                continue;
            }
            let left = match h.mode {
                Mode::Erased => Multiplicity::Zero,
                Mode::Relevant => e.mult.remaining(h.other.get(l)),
            };
            let col = match left.column() {
                "" => " ",
                c => c,
            };
            let ty = self.show_term(&names, &ev.normalize(ctx.len(), &e.ty));
            out.push_str(&format!(" {col} {} : {ty}\n", e.name));
        }
        out.push_str(&"-".repeat(30));
        out.push('\n');
        let goal = self.show_term(&names, &ev.normalize(ctx.len(), &h.goal));
        out.push_str(&format!("{} : {goal}\n", h.name));
        out
    }

    /// Moves the holes of the finished declaration into the reports.
    pub(crate) fn flush_holes(&mut self, decl: &str) {
        let holes = std::mem::take(&mut self.holes);
        for h in &holes {
            let text = self.render_hole(h);
            self.reports.push(HoleReport { name: h.name.clone(), decl: decl.to_string(), text });
        }
    }
}
