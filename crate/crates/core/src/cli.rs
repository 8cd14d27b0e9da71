//! The batch commands and the interactive loop behind the `qtt` binary.
//! Every command returns its output instead of printing it.

use crate::erasure::{check_erased, Eraser};
use crate::error::Error;
use crate::parser::parse_module;
use crate::runtime::{run_main, Input, Program, RunOutcome};
use crate::session::Session;
use crate::syntax::DeclKind;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};

/// Output of one command and the exit code it implies.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Reply {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Reply {
    fn ok(stdout: String) -> Reply {
        Reply { stdout, ..Reply::default() }
    }

    fn fail(stderr: String) -> Reply {
        Reply { stderr, code: 1, ..Reply::default() }
    }
}

/// Whether diagnostics get ANSI colors.
pub fn color_enabled() -> bool {
    std::env::var_os("QTT_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

fn red(s: &str, color: bool) -> String {
    if color {
        format!("\x1b[31m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn render_errors(es: &[Error], color: bool) -> String {
    es.iter().map(|e| red(&e.to_string(), color) + "\n").collect()
}

fn decl_name(k: &DeclKind) -> String {
    match k {
        DeclKind::Sig { names, .. } => format!("signature {}", names.join(", ")),
        DeclKind::Clauses { name, .. } => format!("definition {name}"),
        DeclKind::Data { name, .. } | DeclKind::ShortData { name, .. } => format!("data {name}"),
        DeclKind::Prim { name, .. } => format!("primitive {name}"),
    }
}

/// Loads a file into a fresh session.
pub fn load(path: &Path) -> Result<Session, Vec<Error>> {
    let mut s = Session::new();
    s.load_file(path)?;
    Ok(s)
}

/// `qtt check`: elaborates and erases a file.
pub fn check(path: &Path, color: bool) -> Reply {
    let mut s = Session::new();
    if let Err(es) = s.load_file(path) {
        return Reply::fail(render_errors(&es[..1], color));
    }
    if let Err(e) = Program::new(&s.elab.globals) {
        return Reply::fail(render_errors(&[e.with_file(&path.display().to_string())], color));
    }
    let src = std::fs::read_to_string(path).unwrap_or_default();
    let decls = parse_module(&src, "main").map(|m| m.decls).unwrap_or_default();
    let mut out = String::new();
    for d in &decls {
        out.push_str(&format!("OK {}\n", decl_name(&d.kind)));
    }
    let holes = s.elab.reports.len();
    out.push_str(&format!("{} declarations, {holes} holes\n", decls.len()));
    let mut err = String::new();
    for w in s.warnings() {
        err.push_str(&format!("{}: warning: {}\n", path.display(), w.message));
    }
    Reply { stdout: out, stderr: err, code: 0 }
}

/// Runs an entry point of a loaded session.
pub fn exec(s: &Session, entry: &str, input: Input, echo: bool) -> Result<RunOutcome, Error> {
    let prog = Program::new(&s.elab.globals)?;
    Ok(run_main(&prog, entry, input, echo))
}

fn outcome_reply(o: RunOutcome, echoed: bool, color: bool) -> Reply {
    let mut r = Reply::ok(if echoed { String::new() } else { o.stdout.clone() });
    if let Some(e) = &o.error {
        r.stderr = red(&format!("runtime error: {e}"), color) + "\n";
    }
    if !o.exit_ok() {
        r.code = 1;
    }
    r
}

fn input_from(stdin_file: Option<&Path>) -> Result<Input, String> {
    match stdin_file {
        Some(p) => std::fs::read_to_string(p).map(|t| Input::script(&t)).map_err(|e| format!("cannot read {}: {e}", p.display())),
        None => Ok(Input::Stdin),
    }
}

/// `qtt run`. With `echo`, program output goes straight to stdout as it is
/// produced.
pub fn run(path: &Path, entry: &str, stdin_file: Option<&Path>, echo: bool, color: bool) -> Reply {
    let s = match load(path) {
        Ok(s) => s,
        Err(es) => return Reply::fail(render_errors(&es[..1], color)),
    };
    let input = match input_from(stdin_file) {
        Ok(i) => i,
        Err(e) => return Reply::fail(red(&e, color) + "\n"),
    };
    match exec(&s, entry, input, echo) {
        Ok(o) => outcome_reply(o, echo, color),
        Err(e) => Reply::fail(render_errors(&[e], color)),
    }
}

/// The erased form of a definition, followed by its parameter count and
/// whether it passes the erasure check.
pub fn dump_erased_in(s: &Session, name: &str) -> Result<String, String> {
    let gs = &s.elab.globals;
    let g = gs
        .defs
        .iter()
        .rposition(|d| d.name == name && matches!(d.kind, crate::core::DefKind::Fun { .. }))
        .ok_or_else(|| format!("{name} is not a defined function"))?;
    let def = Eraser::new(gs).erase_def(g).map_err(|e| e.to_string())?;
    let ok = check_erased(gs, &def, g);
    Ok(format!("{}\n-- parameters: {}, checkErased: {ok}\n", def.display(gs), def.params.len()))
}

/// `qtt dump-erased`.
pub fn dump_erased(path: &Path, name: &str, color: bool) -> Reply {
    match load(path) {
        Ok(s) => match dump_erased_in(&s, name) {
            Ok(out) => Reply::ok(out),
            Err(e) => Reply::fail(red(&e, color) + "\n"),
        },
        Err(es) => Reply::fail(render_errors(&es[..1], color)),
    }
}

/// State of the interactive loop.
pub struct Repl {
    pub session: Session,
    pub file: Option<PathBuf>,
    pub stdin_file: Option<PathBuf>,
    pub history: Vec<String>,
    pub color: bool,
}

pub enum Step {
    Continue(Reply),
    Quit,
}

impl Default for Repl {
    fn default() -> Self {
        Repl::new()
    }
}

impl Repl {
    pub fn new() -> Repl {
        Repl { session: Session::new(), file: None, stdin_file: None, history: Vec::new(), color: false }
    }

    /// Replaces the loaded module. The previous state stays when loading fails.
    pub fn load(&mut self, path: &Path) -> Reply {
        let mut s = Session::new();
        match s.load_file(path) {
            Ok(()) => {
                self.session = s;
                self.file = Some(path.to_path_buf());
                let holes = self.session.elab.reports.len();
                Reply::ok(format!("loaded {}, {holes} holes\n", path.display()))
            }
            Err(es) => Reply::fail(render_errors(&es[..1], self.color)),
        }
    }

    pub fn handle(&mut self, line: &str) -> Step {
        let line = line.trim();
        if line.is_empty() {
            return Step::Continue(Reply::default());
        }
        self.history.push(line.to_string());
        let (cmd, rest) = match line.split_once(char::is_whitespace) {
            Some((c, r)) => (c, r.trim()),
            None => (line, ""),
        };
        let reply = match cmd {
            ":q" | ":quit" => return Step::Quit,
            ":t" | ":type" => self.type_of(rest),
            ":holes" => Reply::ok(self.session.holes()),
            ":load" | ":l" => self.load(Path::new(rest)),
            ":exec" => self.exec(rest),
            _ if cmd.starts_with(':') => Reply::fail(format!("unknown command {cmd}\n")),
            _ => match self.session.normalize(line) {
                Ok(s) => Reply::ok(s + "\n"),
                Err(e) => Reply::fail(render_errors(&[e], self.color)),
            },
        };
        Step::Continue(reply)
    }

    fn type_of(&mut self, src: &str) -> Reply {
        if let Ok(report) = self.session.hole(src) {
            return Reply::ok(report);
        }
        match self.session.type_of(src) {
            Ok(s) => Reply::ok(s + "\n"),
            Err(e) => Reply::fail(render_errors(&[e], self.color)),
        }
    }

    fn exec(&mut self, entry: &str) -> Reply {
        let input = match input_from(self.stdin_file.as_deref()) {
            Ok(i) => i,
            Err(e) => return Reply::fail(e + "\n"),
        };
        match exec(&self.session, entry, input, false) {
            Ok(o) => outcome_reply(o, false, self.color),
            Err(e) => Reply::fail(render_errors(&[e], self.color)),
        }
    }
}
