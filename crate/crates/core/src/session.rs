//! Loading modules into one elaboration state, and the queries the REPL
//! and the command line run against it.

use crate::core::{DefKind, GlobalId};
use crate::elab::{Ctx, Elab, Mode, Warning};
use crate::error::{Error, ErrorKind};
use crate::parser::{parse_module, parse_term};
use crate::syntax::{desugar_term, Span};
use std::path::{Path, PathBuf};

/// Sources shipped with the library. Imports that are not found next to the
/// importing file are looked up here.
pub const CORPUS: &[(&str, &str)] = &[
    ("prelude", include_str!("../corpus/prelude.qtt")),
    ("printf", include_str!("../corpus/printf.qtt")),
    ("rle", include_str!("../corpus/rle.qtt")),
    ("atm", include_str!("../corpus/atm.qtt")),
    ("sessions", include_str!("../corpus/sessions.qtt")),
    ("utils", include_str!("../corpus/utils.qtt")),
];

pub fn corpus_source(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub struct Session {
    pub elab: Elab,
    loaded: Vec<String>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    /// A session with the prelude loaded.
    pub fn new() -> Session {
        let mut s = Session::bare();
        s.load_module("prelude", corpus_source("prelude").unwrap(), None)
            .expect("the prelude elaborates");
        s
    }

    /// A session with nothing loaded.
    pub fn bare() -> Session {
        Session { elab: Elab::new(), loaded: Vec::new() }
    }

    pub fn loaded_modules(&self) -> &[String] {
        &self.loaded
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.elab.warnings
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), Vec<Error>> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| vec![Error::new(ErrorKind::Io, Span::default(), format!("cannot read {}: {e}", path.display()))])?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("main").to_string();
        let file = path.display().to_string();
        self.elab.file = Some(file.clone());
        let r = self.load_module(&name, &src, path.parent());
        r.map_err(|es| es.into_iter().map(|e| if e.file.is_none() { e.with_file(&file) } else { e }).collect())
    }

    /// Parses and elaborates a module after its imports. Does nothing if a
    /// module with this name is already loaded.
    pub fn load_module(&mut self, name: &str, src: &str, dir: Option<&Path>) -> Result<(), Vec<Error>> {
        if self.loaded.iter().any(|m| m == name) {
            return Ok(());
        }
        let m = parse_module(src, name).map_err(|e| vec![e])?;
        if name != "prelude" && !self.loaded.iter().any(|m| m == "prelude") {
            self.load_module("prelude", corpus_source("prelude").unwrap(), None)?;
        }
        for imp in &m.imports {
            self.load_import(imp, dir)?;
        }
        let prev_module = std::mem::replace(&mut self.elab.module, name.to_string());
        let snap = self.elab.snapshot();
        let (reports, warnings) = (self.elab.reports.len(), self.elab.warnings.len());
        let errors = self.elab.elab_decls(&m.decls);
        self.elab.module = prev_module;
        if errors.is_empty() {
            self.loaded.push(name.to_string());
            Ok(())
        } else {
            // A module that fails leaves nothing behind.
            self.elab.restore(snap);
            self.elab.reports.truncate(reports);
            self.elab.warnings.truncate(warnings);
            Err(errors)
        }
    }

    fn load_import(&mut self, name: &str, dir: Option<&Path>) -> Result<(), Vec<Error>> {
        if self.loaded.iter().any(|m| m == name) {
            return Ok(());
        }
        let local: Option<PathBuf> = dir.map(|d| d.join(format!("{name}.qtt"))).filter(|p| p.exists());
        let prev_file = self.elab.file.clone();
        let r = match local {
            Some(p) => {
                let src = std::fs::read_to_string(&p)
                    .map_err(|e| vec![Error::new(ErrorKind::Io, Span::default(), format!("cannot read {}: {e}", p.display()))])?;
                self.elab.file = Some(p.display().to_string());
                self.load_module(name, &src, p.parent())
            }
            None => match corpus_source(name) {
                Some(src) => {
                    self.elab.file = Some(format!("{name}.qtt"));
                    self.load_module(name, src, None)
                }
                None => Err(vec![Error::new(ErrorKind::UnknownName, Span::default(), format!("cannot find module {name}"))]),
            },
        };
        self.elab.file = prev_file;
        r
    }

    /// The most recent definition with this name.
    pub fn global(&self, name: &str) -> Option<GlobalId> {
        self.elab.lookup_global(name).last().copied()
    }

    /// `term : type` with the type fully normalized.
    pub fn type_of(&mut self, src: &str) -> Result<String, Error> {
        let t = desugar_term(&parse_term(src)?)?;
        self.type_of_term(&t)
    }

    pub fn type_of_term(&mut self, t: &crate::syntax::Term) -> Result<String, Error> {
        let file = self.elab.file.take();
        let r = self.type_of_term_inner(t);
        self.elab.file = file;
        r
    }

    fn type_of_term_inner(&mut self, t: &crate::syntax::Term) -> Result<String, Error> {
        // A bare global name shows its declared type, every overload on its own line.
        if let crate::syntax::TermKind::Var(x) = &t.kind {
            let shown = if x.starts_with(|c: char| c.is_alphanumeric() || c == '_') { x.clone() } else { format!("({x})") };
            let lines: Vec<String> = self
                .elab
                .lookup_global(x)
                .iter()
                .filter(|g| !matches!(self.elab.globals.get(**g).kind, DefKind::Hole | DefKind::Pending))
                .map(|g| format!("{shown} : {}", self.elab.global_type_string(*g)))
                .collect();
            if !lines.is_empty() {
                return Ok(lines.join("\n"));
            }
        }
        let snap = self.elab.snapshot();
        let mut ctx = Ctx::new();
        let r = self.elab.infer(&mut ctx, Mode::Erased, t);
        let out = r.map(|(tm, ty, _)| {
            let tm = self.elab.zonk(0, &tm);
            let ty = self.elab.ev().normalize(0, &ty);
            format!("{} : {}", self.elab.show_term(&[], &tm), self.elab.show_term(&[], &ty))
        });
        self.elab.restore(snap);
        out
    }

    /// Normal form of a closed term.
    pub fn normalize(&mut self, src: &str) -> Result<String, Error> {
        let file = self.elab.file.take();
        let r = self.normalize_inner(src);
        self.elab.file = file;
        r
    }

    fn normalize_inner(&mut self, src: &str) -> Result<String, Error> {
        let t = desugar_term(&parse_term(src)?)?;
        let snap = self.elab.snapshot();
        let mut ctx = Ctx::new();
        let r = self.elab.infer(&mut ctx, Mode::Erased, &t);
        let out = r.map(|(tm, _, _)| {
            let v = self.elab.ev().eval(&Default::default(), &tm);
            let n = self.elab.ev().normalize(0, &v);
            self.elab.show_term(&[], &n)
        });
        self.elab.restore(snap);
        out
    }

    /// Every hole report, in the order the holes were made.
    pub fn holes(&self) -> String {
        if self.elab.reports.is_empty() {
            return "no holes\n".to_string();
        }
        self.elab.reports.iter().map(|r| r.text.clone()).collect::<Vec<_>>().join("\n")
    }

    pub fn hole(&self, name: &str) -> Result<String, Error> {
        self.elab
            .reports
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.text.clone())
            .ok_or_else(|| Error::new(ErrorKind::UnknownHole, Span::default(), format!("there is no hole named {name}")))
    }
}
