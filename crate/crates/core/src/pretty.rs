//! Printing core terms back in surface notation. Implicit arguments are
//! hidden, tuples and lists get their literal forms, and a Pi whose variable
//! is unused prints as a plain arrow.

use crate::core::*;
use crate::multiplicity::Multiplicity;
use crate::syntax::{is_operator_name, operator_info, Assoc};

const TOP: u8 = 0;
const ARROW_DOM: u8 = 1;
const APP: u8 = 10;
const ATOM: u8 = 11;

pub fn term_to_string(globals: &Globals, names: &[String], t: &Term) -> String {
    let mut p = Printer { globals, names: names.to_vec() };
    p.go(t, TOP)
}

struct Printer<'a> {
    globals: &'a Globals,
    names: Vec<String>,
}

fn paren(s: String, wrap: bool) -> String {
    if wrap {
        format!("({s})")
    } else {
        s
    }
}

fn mult_prefix(m: Multiplicity) -> &'static str {
    match m {
        Multiplicity::Zero => "0 ",
        Multiplicity::One => "1 ",
        Multiplicity::Omega => "",
    }
}

impl Printer<'_> {
    fn var(&self, i: usize) -> String {
        match self.names.len().checked_sub(i + 1) {
            Some(l) => self.names[l].clone(),
            None => format!("#{i}"),
        }
    }

    fn global(&self, g: GlobalId) -> String {
        let n = self.globals.name(g);
        if matches!(self.globals.get(g).kind, DefKind::Hole) {
            format!("?{n}")
        } else if is_operator_name(n) {
            format!("({n})")
        } else {
            n.to_string()
        }
    }

    fn with<R>(&mut self, name: &str, f: impl FnOnce(&mut Self) -> R) -> R {
        self.names.push(name.to_string());
        let r = f(self);
        self.names.pop();
        r
    }

    fn go(&mut self, t: &Term, prec: u8) -> String {
        match t {
            Term::Var(i) => self.var(*i),
            Term::Global(g) => self.app(*g, &[], prec),
            Term::Meta(m, _) => format!("?{m}"),
            Term::Type => "Type".into(),
            Term::World => "%World".into(),
            Term::Lit(l) => lit(l),
            Term::Pi(..) => paren(self.pi(t), prec > TOP),
            Term::Lam(..) => {
                let mut names = Vec::new();
                let mut body = t;
                while let Term::Lam(b, inner) = body {
                    names.push(b.name.clone());
                    body = inner;
                }
                for n in &names {
                    self.names.push(n.clone());
                }
                let s = format!("\\{} => {}", names.join(", "), self.go(body, TOP));
                self.names.truncate(self.names.len() - names.len());
                paren(s, prec > TOP)
            }
            Term::Let(b, _, v, body) => {
                let v = self.go(v, TOP);
                let body = self.with(&b.name, |p| p.go(body, TOP));
                paren(format!("let {} = {v} in {body}", b.name), prec > TOP)
            }
            Term::Case(s, _, arms, def) => {
                let s = self.go(s, TOP);
                let mut alts: Vec<String> = arms
                    .iter()
                    .map(|a| {
                        let pat = match &a.pat {
                            ArmPat::Lit(l) => lit(l),
                            ArmPat::Con(c) => self.arm_pattern(*c, &a.names),
                        };
                        let n = self.names.len();
                        self.names.extend(a.names.iter().cloned());
                        let body = self.go(&a.body, TOP);
                        self.names.truncate(n);
                        format!("{pat} => {body}")
                    })
                    .collect();
                if let Some(d) = def {
                    alts.push(format!("_ => {}", self.go(d, TOP)));
                }
                paren(format!("case {s} of {{ {} }}", alts.join("; ")), prec > TOP)
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                let explicit: Vec<&Term> = args.iter().filter(|(_, _, i)| *i == Icit::Explicit).map(|(a, _, _)| *a).collect();
                match head {
                    Term::Global(g) => {
                        let named = self.non_default_args(*g, &args);
                        if named.is_empty() {
                            return self.app(*g, &explicit, prec);
                        }
                        let mut s = self.global(*g);
                        for n in named {
                            s.push(' ');
                            s.push_str(&n);
                        }
                        for a in explicit {
                            s.push(' ');
                            s.push_str(&self.go(a, ATOM));
                        }
                        paren(s, prec > APP)
                    }
                    Term::Meta(..) => self.go(head, prec),
                    _ => {
                        let mut s = self.go(head, ATOM);
                        for a in explicit {
                            s.push(' ');
                            s.push_str(&self.go(a, ATOM));
                        }
                        paren(s, prec > APP)
                    }
                }
            }
        }
    }

    /// `{name=value}` for each argument given to a binder with a default
    /// that differs from the default.
    fn non_default_args(&mut self, g: GlobalId, args: &[(&Term, Multiplicity, Icit)]) -> Vec<String> {
        let mut out = Vec::new();
        let mut ty = self.globals.get(g).ty.clone();
        for (a, _, _) in args {
            let Term::Pi(b, _, c) = &*ty else { break };
            if let BinderKind::Default(d) = &b.kind {
                if **d != **a {
                    let v = match a {
                        Term::Global(c) => match self.globals.name(*c) {
                            "None" => "0".to_string(),
                            "Linear" => "1".to_string(),
                            _ => self.go(a, TOP),
                        },
                        _ => self.go(a, TOP),
                    };
                    out.push(format!("{{{}={v}}}", b.name));
                }
            }
            ty = c.clone();
        }
        out
    }

    /// Constructor pattern with its explicit field names.
    fn arm_pattern(&self, c: GlobalId, names: &[String]) -> String {
        let mut s = self.global(c);
        let kinds = explicit_fields(&self.globals.get(c).ty);
        for (k, n) in names.iter().enumerate() {
            if kinds.get(k).copied().unwrap_or(true) {
                s.push(' ');
                s.push_str(n);
            }
        }
        s
    }

    fn app(&mut self, g: GlobalId, args: &[&Term], prec: u8) -> String {
        let name = self.globals.name(g).to_string();
        match (name.as_str(), args.len()) {
            ("MkUnit" | "Unit", 0) => return "()".into(),
            ("Nil", 0) => return "[]".into(),
            ("S", 1) => {
                if let Some(n) = self.nat_value(args[0]) {
                    return (n + 1).to_string();
                }
            }
            ("MkPair" | "Pair", 2) => {
                let mut items = vec![self.go(args[0], TOP)];
                let mut rest = args[1];
                while let Some((x, r)) = self.tuple_tail(rest, &name) {
                    items.push(self.go(x, TOP));
                    rest = r;
                }
                items.push(self.go(rest, TOP));
                return format!("({})", items.join(", "));
            }
            ("::", 2) => {
                if let Some(items) = self.list_items(args[0], args[1]) {
                    let items: Vec<String> = items.iter().map(|x| self.go(x, TOP)).collect();
                    return format!("[{}]", items.join(", "));
                }
            }
            _ => {}
        }
        if is_operator_name(&name) && args.len() == 2 {
            let (p, assoc) = operator_info(&name).unwrap_or((9, Assoc::Left));
            let (lp, rp) = match assoc {
                Assoc::Left => (p, p + 1),
                Assoc::Right => (p + 1, p),
                Assoc::Non => (p + 1, p + 1),
            };
            let l = self.go(args[0], lp);
            let r = self.go(args[1], rp);
            return paren(format!("{l} {name} {r}"), prec > p);
        }
        let mut s = self.global(g);
        if args.is_empty() {
            return s;
        }
        for a in args {
            s.push(' ');
            s.push_str(&self.go(a, ATOM));
        }
        paren(s, prec > APP)
    }

    /// The number a closed `S (S .. Z)` chain denotes.
    fn nat_value(&self, t: &Term) -> Option<u64> {
        let (h, args) = t.spine();
        let explicit: Vec<&Term> = args.iter().filter(|(_, _, i)| *i == Icit::Explicit).map(|(a, _, _)| *a).collect();
        match (h, explicit.as_slice()) {
            (Term::Global(g), []) if self.globals.name(*g) == "Z" => Some(0),
            (Term::Global(g), [x]) if self.globals.name(*g) == "S" => self.nat_value(x).map(|n| n + 1),
            _ => None,
        }
    }

    fn tuple_tail<'t>(&self, t: &'t Term, name: &str) -> Option<(&'t Term, &'t Term)> {
        let (h, args) = t.spine();
        let explicit: Vec<&Term> = args.iter().filter(|(_, _, i)| *i == Icit::Explicit).map(|(a, _, _)| *a).collect();
        match h {
            Term::Global(g) if self.globals.name(*g) == name && explicit.len() == 2 => Some((explicit[0], explicit[1])),
            _ => None,
        }
    }

    /// Elements of a `::` chain ending in `Nil`.
    fn list_items<'t>(&self, x: &'t Term, rest: &'t Term) -> Option<Vec<&'t Term>> {
        let mut items = vec![x];
        let mut rest = rest;
        loop {
            let (h, args) = rest.spine();
            let explicit: Vec<&Term> = args.iter().filter(|(_, _, i)| *i == Icit::Explicit).map(|(a, _, _)| *a).collect();
            match h {
                Term::Global(g) if self.globals.name(*g) == "Nil" && explicit.is_empty() => return Some(items),
                Term::Global(g) if self.globals.name(*g) == "::" && explicit.len() == 2 => {
                    items.push(explicit[0]);
                    rest = explicit[1];
                }
                _ => return None,
            }
        }
    }

    fn pi(&mut self, t: &Term) -> String {
        let Term::Pi(b, dom, cod) = t else { unreachable!() };
        let used = cod.mentions(0);
        let name = if used { b.name.clone() } else { "_".to_string() };
        let binder = match &b.kind {
            BinderKind::Explicit if !used && b.mult == Multiplicity::Omega => self.go(dom, ARROW_DOM),
            BinderKind::Explicit => format!("({}{name} : {})", mult_prefix(b.mult), self.go(dom, TOP)),
            BinderKind::Implicit => format!("{{{}{} : {}}}", mult_prefix(b.mult), b.name, self.go(dom, TOP)),
            BinderKind::Auto => format!("{{auto {}{} : {}}}", mult_prefix(b.mult), b.name, self.go(dom, TOP)),
            BinderKind::Default(d) => {
                format!("{{default {} {}{} : {}}}", self.go(d, ATOM), mult_prefix(b.mult), b.name, self.go(dom, TOP))
            }
        };
        let cod = self.with(&b.name, |p| p.go(cod, TOP));
        format!("{binder} -> {cod}")
    }
}

/// For each Pi binder of a constructor type, whether it is explicit.
fn explicit_fields(ty: &Term) -> Vec<bool> {
    let mut out = Vec::new();
    let mut t = ty;
    while let Term::Pi(b, _, c) = t {
        out.push(b.kind == BinderKind::Explicit);
        t = c;
    }
    out
}

pub fn lit(l: &Lit) -> String {
    match l {
        Lit::Int(n) => n.to_string(),
        Lit::Str(s) => format!("{s:?}"),
        Lit::Char(c) => format!("{c:?}"),
    }
}
