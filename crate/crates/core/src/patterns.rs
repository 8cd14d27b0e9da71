//! Compiling clause patterns into case trees, and a direct clause-by-clause
//! matcher with the same meaning.

use crate::core::*;
use crate::eval::{Env, Eval, Head, Value};

#[derive(Debug, Clone)]
enum P {
    Wild,
    Var(usize),
    Con(usize, GlobalId, Vec<Pat>),
    Lit(usize, Lit),
}

impl From<&Pat> for P {
    fn from(p: &Pat) -> P {
        match p {
            Pat::Var(l) => P::Var(*l),
            Pat::Con(l, c, subs) => P::Con(*l, *c, subs.clone()),
            Pat::Lit(l, lit) => P::Lit(*l, lit.clone()),
        }
    }
}

#[derive(Debug, Clone)]
struct Row {
    /// Column patterns, each with the tree level it is matched against.
    cols: Vec<(usize, P)>,
    clause: usize,
    bindings: Vec<Option<usize>>,
}

impl Row {
    fn bind(&mut self, l: usize, tree_level: usize) {
        self.bindings[l] = Some(tree_level);
    }
}

struct Compiler<'a> {
    globals: &'a Globals,
    clauses: &'a [CoreClause],
    missing: bool,
}

/// Compiles clauses over `arity` arguments. The flag is set when some
/// combination of constructors is matched by no clause.
pub fn compile(globals: &Globals, arity: usize, clauses: &[CoreClause]) -> (CaseTree, bool) {
    let rows = clauses
        .iter()
        .enumerate()
        .map(|(i, c)| Row { cols: c.pats.iter().map(|p| (p.level(), P::from(p))).collect(), clause: i, bindings: vec![None; c.depth] })
        .collect();
    let mut comp = Compiler { globals, clauses, missing: false };
    let tree = comp.go(rows, arity);
    (tree, comp.missing)
}

impl Compiler<'_> {
    fn go(&mut self, mut rows: Vec<Row>, next: usize) -> CaseTree {
        if rows.is_empty() {
            self.missing = true;
            return CaseTree::Missing;
        }
        for r in &mut rows {
            for (tl, p) in &r.cols {
                if let P::Var(l) = p {
                    r.bindings[*l] = Some(*tl);
                }
            }
        }
        let Some(ci) = rows[0].cols.iter().position(|(_, p)| matches!(p, P::Con(..) | P::Lit(..))) else {
            let r = &rows[0];
            let clause = &self.clauses[r.clause];
            let bindings = r.bindings.iter().map(|b| b.expect("every clause variable is bound")).collect();
            return CaseTree::Leaf { clause: r.clause, bindings, rhs: clause.rhs.clone() };
        };
        let var = rows[0].cols[ci].0;
        let mut heads: Vec<ArmPat> = Vec::new();
        for r in &rows {
            let h = match &r.cols[ci].1 {
                P::Con(_, c, _) => ArmPat::Con(*c),
                P::Lit(_, l) => ArmPat::Lit(l.clone()),
                _ => continue,
            };
            if !heads.contains(&h) {
                heads.push(h);
            }
        }
        let mut arms = Vec::new();
        for h in &heads {
            let arity = match h {
                ArmPat::Con(c) => match self.globals.get(*c).kind {
                    DefKind::Con { arity, .. } => arity,
                    _ => 0,
                },
                ArmPat::Lit(_) => 0,
            };
            let mut sub = Vec::new();
            for r in &rows {
                let mut r = r.clone();
                let (_, p) = r.cols.remove(ci);
                let fields: Vec<(usize, P)> = match p {
                    P::Con(l, c, subs) if ArmPat::Con(c) == *h => {
                        r.bind(l, var);
                        subs.iter().enumerate().map(|(j, s)| (next + j, P::from(s))).collect()
                    }
                    P::Lit(l, lit) if ArmPat::Lit(lit.clone()) == *h => {
                        r.bind(l, var);
                        Vec::new()
                    }
                    P::Var(_) | P::Wild => (0..arity).map(|j| (next + j, P::Wild)).collect(),
                    _ => continue,
                };
                r.cols.splice(ci..ci, fields);
                sub.push(r);
            }
            arms.push(TreeArm { pat: h.clone(), arity, tree: self.go(sub, next + arity) });
        }
        let complete = match heads.first() {
            Some(ArmPat::Con(c)) => match self.globals.get(*c).kind {
                DefKind::Con { tycon, .. } => match &self.globals.get(tycon).kind {
                    DefKind::TyCon { cons, .. } => cons.iter().all(|k| heads.contains(&ArmPat::Con(*k))),
                    _ => false,
                },
                _ => false,
            },
            _ => false,
        };
        let default = if complete {
            None
        } else {
            let sub = rows
                .iter()
                .filter(|r| matches!(r.cols[ci].1, P::Var(_) | P::Wild))
                .map(|r| {
                    let mut r = r.clone();
                    r.cols.remove(ci);
                    r
                })
                .collect();
            Some(Box::new(self.go(sub, next)))
        };
        CaseTree::Test { var, arms, default }
    }
}

enum Outcome {
    Match,
    Fail,
    Stuck,
}

fn match_pat(ev: &Eval, p: &Pat, v: Value, env: &mut [Option<Value>]) -> Outcome {
    let v = ev.whnf(v);
    match p {
        Pat::Var(l) => {
            env[*l] = Some(v);
            Outcome::Match
        }
        Pat::Lit(l, lit) => match &v {
            Value::Lit(x) if x == lit => {
                env[*l] = Some(v);
                Outcome::Match
            }
            Value::Lit(_) => Outcome::Fail,
            _ => Outcome::Stuck,
        },
        Pat::Con(l, c, subs) => {
            if !ev.is_saturated_con(&v) {
                return Outcome::Stuck;
            }
            let (g, args) = v.as_global_app().expect("saturated constructor");
            if g != *c {
                return Outcome::Fail;
            }
            let args: Vec<Value> = args.into_iter().cloned().collect();
            env[*l] = Some(v);
            for (s, a) in subs.iter().zip(args) {
                match match_pat(ev, s, a, env) {
                    Outcome::Match => {}
                    other => return other,
                }
            }
            Outcome::Match
        }
    }
}

/// Tries the clauses in order on the arguments; the right-hand side of the
/// first one that matches, evaluated. `None` when no clause matches or a
/// pattern is stuck on a neutral value.
pub fn match_clauses(ev: &Eval, clauses: &[CoreClause], args: &[Value]) -> Option<Value> {
    for c in clauses {
        let mut env = vec![None; c.depth];
        let mut outcome = Outcome::Match;
        for (p, a) in c.pats.iter().zip(args) {
            outcome = match_pat(ev, p, a.clone(), &mut env);
            if !matches!(outcome, Outcome::Match) {
                break;
            }
        }
        match outcome {
            Outcome::Match => {
                let values: Option<Vec<Value>> = env.into_iter().collect();
                return Some(ev.eval(&Env::from_values(values?), &c.rhs));
            }
            Outcome::Fail => continue,
            Outcome::Stuck => return None,
        }
    }
    None
}

/// Whether a value is built from constructors and literals only.
pub fn is_ground(ev: &Eval, v: &Value) -> bool {
    match ev.whnf(v.clone()) {
        Value::Lit(_) | Value::Type => true,
        w @ Value::Neutral(Head::Global(_), _) => ev.is_saturated_con(&w) && w.as_global_app().is_some_and(|(_, xs)| xs.iter().all(|x| is_ground(ev, x))),
        _ => false,
    }
}
