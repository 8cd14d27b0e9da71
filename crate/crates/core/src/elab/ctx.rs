//! Typing contexts. Each entry carries its declared multiplicity; the
//! environment maps every level to its value, which is the variable itself
//! unless pattern matching has refined it or a `let` defined it.

use crate::core::Term;
use crate::eval::{Env, Eval, Head, Value};
use crate::multiplicity::Multiplicity;

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub mult: Multiplicity,
    pub ty: Value,
    /// Introduced by desugaring or an implicit constructor field; not shown in hole reports.
    pub hidden: bool,
    /// Stands for itself, so metas may abstract over it.
    pub bound: bool,
    /// Replaced by a pattern; left out of hole reports.
    pub refined: bool,
    /// For a constructor field bound by a clause pattern, the level it was matched out of.
    pub origin: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct Ctx {
    pub entries: Vec<Entry>,
    values: Vec<Value>,
    env: Env,
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn env(&self) -> &Env {
        &self.env
    }

    pub fn value(&self, level: usize) -> &Value {
        &self.values[level]
    }

    pub fn bind(&mut self, name: &str, mult: Multiplicity, ty: Value, hidden: bool) -> usize {
        let level = self.len();
        self.push(Entry { name: name.to_string(), mult, ty, hidden, bound: true, refined: false, origin: None }, Value::var(level));
        level
    }

    pub fn define(&mut self, name: &str, mult: Multiplicity, ty: Value, value: Value) -> usize {
        let level = self.len();
        self.push(Entry { name: name.to_string(), mult, ty, hidden: false, bound: false, refined: false, origin: None }, value);
        level
    }

    fn push(&mut self, e: Entry, v: Value) {
        self.entries.push(e);
        self.env = self.env.push(v.clone());
        self.values.push(v);
    }

    pub fn pop(&mut self) {
        self.entries.pop();
        self.values.pop();
        self.env = Env::from_values(self.values.iter().cloned());
    }

    pub fn truncate(&mut self, len: usize) {
        while self.len() > len {
            self.pop();
        }
    }

    /// Most recent visible entry with this name. Names generated by
    /// desugaring start with `$` and are found even though hidden.
    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.entries.iter().rposition(|e| e.name == name && (!e.hidden || name.starts_with('$')))
    }

    /// Levels of variables that stand for themselves, for meta spines.
    pub fn bound_indices(&self) -> Vec<usize> {
        let n = self.len();
        (0..n).filter(|l| self.entries[*l].bound).map(|l| n - 1 - l).collect()
    }

    /// Whether the level is a variable that has not been refined.
    pub fn is_rigid_var(&self, level: usize) -> bool {
        self.entries[level].bound && matches!(&self.values[level], Value::Neutral(Head::Var(l), sp) if *l == level && sp.is_empty())
    }

    /// Replaces every occurrence of the variable at `level` by `value`,
    /// re-evaluating the types and values of all entries.
    pub fn refine(&mut self, ev: &Eval, level: usize, value: Value) {
        let depth = self.len();
        let quoted_tys: Vec<Term> = self.entries.iter().map(|e| ev.quote(depth, &e.ty)).collect();
        let quoted_vals: Vec<Term> = self.values.iter().map(|v| ev.quote(depth, v)).collect();
        let mut subst: Vec<Value> = (0..depth).map(Value::var).collect();
        subst[level] = value;
        let env = Env::from_values(subst);
        for (e, t) in self.entries.iter_mut().zip(&quoted_tys) {
            e.ty = ev.eval(&env, t);
        }
        self.values = quoted_vals.iter().map(|t| ev.eval(&env, t)).collect();
        self.entries[level].bound = false;
        self.entries[level].refined = true;
        self.env = Env::from_values(self.values.iter().cloned());
    }

    /// Applies the current refinements to a value computed before them.
    pub fn resubst(&self, ev: &Eval, v: &Value) -> Value {
        let t = ev.quote(self.len(), v);
        ev.eval(&self.env, &t)
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }
}
