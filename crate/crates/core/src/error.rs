use crate::syntax::Span;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    SyntaxError,
    EmptyDoBlock,
    UnknownName,
    TypeMismatch,
    LinearityError,
    ErasedUsage,
    UnsolvedMeta,
    NotAFunction,
    UnifyMismatch,
    OccursCheck,
    NonPatternSpine,
    AutoSearchFailure,
    InvalidConstructorReturnType,
    PatternArityMismatch,
    CannotRefineNonVariableScrutinee,
    InvalidPattern,
    UnknownHole,
    ErasureLeak,
    Io,
    Runtime,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for ErrorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<ErrorKind, String> {
        use ErrorKind::*;
        let all = [
            SyntaxError,
            EmptyDoBlock,
            UnknownName,
            TypeMismatch,
            LinearityError,
            ErasedUsage,
            UnsolvedMeta,
            NotAFunction,
            UnifyMismatch,
            OccursCheck,
            NonPatternSpine,
            AutoSearchFailure,
            InvalidConstructorReturnType,
            PatternArityMismatch,
            CannotRefineNonVariableScrutinee,
            InvalidPattern,
            UnknownHole,
            ErasureLeak,
            Io,
            Runtime,
        ];
        all.into_iter()
            .find(|k| k.to_string() == s.trim())
            .ok_or_else(|| format!("unknown error kind `{s}`"))
    }
}

/// A diagnostic with a source location. Rendered as
/// `<file>:<line>:<col>: <kind>: <detail>`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}", self.render())]
pub struct Error {
    pub kind: ErrorKind,
    pub span: Span,
    pub message: String,
    pub file: Option<String>,
}

impl Error {
    pub fn new(kind: ErrorKind, span: Span, message: String) -> Error {
        Error { kind, span, message, file: None }
    }

    pub fn with_file(mut self, file: &str) -> Error {
        if self.file.is_none() {
            self.file = Some(file.to_string());
        }
        self
    }

    pub fn render(&self) -> String {
        let file = self.file.as_deref().unwrap_or("<input>");
        if self.span.line == 0 {
            return format!("{}: {}: {}", file, self.kind, self.message);
        }
        format!("{}:{}:{}: {}: {}", file, self.span.line, self.span.col, self.kind, self.message)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
