//! C interface to the toolchain. A `QttSession` is an opaque handle that
//! owns elaborated modules; every call reports a `QttStatus`, and strings
//! handed out must be released with `qtt_string_free`.

use qtt_core::cli::dump_erased_in;
use qtt_core::runtime::{run_main, Input, Program};
use qtt_core::session::Session;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QttStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ElaborationFailed = 3,
    RuntimeFailed = 4,
    NotFound = 5,
    Internal = 6,
}

/// Opaque session handle.
pub struct QttSession {
    session: Session,
    last_error: CString,
}

impl QttSession {
    fn fail(&mut self, status: QttStatus, msg: impl Into<String>) -> QttStatus {
        let msg: String = msg.into();
        self.last_error = CString::new(msg.replace('\0', " ")).unwrap_or_default();
        status
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, QttStatus> {
    if p.is_null() {
        return Err(QttStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| QttStatus::InvalidUtf8)
}

fn give(s: String, out: *mut *mut c_char) {
    let c = CString::new(s.replace('\0', " ")).unwrap_or_default();
    unsafe { *out = c.into_raw() };
}

/// Runs `f` on the session, turning panics into `Internal`.
fn with_session(s: *mut QttSession, f: impl FnOnce(&mut QttSession) -> QttStatus) -> QttStatus {
    if s.is_null() {
        return QttStatus::NullArgument;
    }
    let s = unsafe { &mut *s };
    match catch_unwind(AssertUnwindSafe(|| f(&mut *s))) {
        Ok(st) => st,
        Err(_) => s.fail(QttStatus::Internal, "internal error"),
    }
}

/// A new session with the prelude loaded. Free with `qtt_session_free`.
#[no_mangle]
pub extern "C" fn qtt_session_new() -> *mut QttSession {
    match catch_unwind(|| Box::new(QttSession { session: Session::new(), last_error: CString::default() })) {
        Ok(b) => Box::into_raw(b),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must come from `qtt_session_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qtt_session_free(s: *mut QttSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Message of the most recent failure; empty if none. Owned by the
/// session and valid until the next call on it.
///
/// # Safety
/// `s` must be a live session or null.
#[no_mangle]
pub unsafe extern "C" fn qtt_last_error(s: *const QttSession) -> *const c_char {
    if s.is_null() {
        return ptr::null();
    }
    (*s).last_error.as_ptr()
}

/// Elaborates source text as a module called `name`.
///
/// # Safety
/// `name` and `source` must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn qtt_load_source(s: *mut QttSession, name: *const c_char, source: *const c_char) -> QttStatus {
    with_session(s, |q| {
        let (name, src) = match (text(name), text(source)) {
            (Ok(n), Ok(t)) => (n, t),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        match q.session.load_module(name, src, None) {
            Ok(()) => QttStatus::Ok,
            Err(es) => q.fail(QttStatus::ElaborationFailed, es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n")),
        }
    })
}

/// Elaborates a file and its imports.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qtt_load_file(s: *mut QttSession, path: *const c_char) -> QttStatus {
    with_session(s, |q| {
        let path = match text(path) {
            Ok(p) => p,
            Err(e) => return e,
        };
        match q.session.load_file(Path::new(path)) {
            Ok(()) => QttStatus::Ok,
            Err(es) => q.fail(QttStatus::ElaborationFailed, es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n")),
        }
    })
}

unsafe fn query(s: *mut QttSession, input: *const c_char, out: *mut *mut c_char, f: impl FnOnce(&mut QttSession, &str) -> Result<String, (QttStatus, String)>) -> QttStatus {
    if out.is_null() {
        return QttStatus::NullArgument;
    }
    *out = ptr::null_mut();
    with_session(s, |q| {
        let input = match text(input) {
            Ok(t) => t,
            Err(e) => return e,
        };
        match f(q, input) {
            Ok(r) => {
                give(r, out);
                QttStatus::Ok
            }
            Err((st, msg)) => q.fail(st, msg),
        }
    })
}

/// `term : type` with the type normalized.
///
/// # Safety
/// `term` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qtt_type_of(s: *mut QttSession, term: *const c_char, out: *mut *mut c_char) -> QttStatus {
    query(s, term, out, |q, t| q.session.type_of(t).map_err(|e| (QttStatus::ElaborationFailed, e.to_string())))
}

/// Normal form of a closed term.
///
/// # Safety
/// `term` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qtt_normalize(s: *mut QttSession, term: *const c_char, out: *mut *mut c_char) -> QttStatus {
    query(s, term, out, |q, t| q.session.normalize(t).map_err(|e| (QttStatus::ElaborationFailed, e.to_string())))
}

/// Reports for every hole, or "no holes".
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qtt_holes(s: *mut QttSession, out: *mut *mut c_char) -> QttStatus {
    query(s, c"".as_ptr(), out, |q, _| Ok(q.session.holes()))
}

/// Run-time form of a definition.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qtt_dump_erased(s: *mut QttSession, name: *const c_char, out: *mut *mut c_char) -> QttStatus {
    query(s, name, out, |q, n| dump_erased_in(&q.session, n).map_err(|e| (QttStatus::NotFound, e)))
}

/// Runs an entry point with `stdin_text` as its input (may be null) and
/// returns everything it printed.
///
/// # Safety
/// `entry` must be a NUL-terminated string, `stdin_text` one or null, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qtt_run(s: *mut QttSession, entry: *const c_char, stdin_text: *const c_char, out: *mut *mut c_char) -> QttStatus {
    let input = if stdin_text.is_null() {
        String::new()
    } else {
        match text(stdin_text) {
            Ok(t) => t.to_string(),
            Err(e) => return e,
        }
    };
    query(s, entry, out, |q, e| {
        let prog = Program::new(&q.session.elab.globals).map_err(|e| (QttStatus::ElaborationFailed, e.to_string()))?;
        if prog.find(e).is_none() {
            return Err((QttStatus::NotFound, format!("{e} is not defined")));
        }
        let o = run_main(&prog, e, Input::script(&input), false);
        match &o.error {
            None if o.exit_ok() => Ok(o.stdout),
            Some(err) => Err((QttStatus::RuntimeFailed, err.to_string())),
            None => Err((QttStatus::RuntimeFailed, format!("blocked processes {:?}", o.blocked))),
        }
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `p` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn qtt_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn qtt_status_name(st: QttStatus) -> *const c_char {
    let s: &'static CStr = match st {
        QttStatus::Ok => c"ok",
        QttStatus::NullArgument => c"null argument",
        QttStatus::InvalidUtf8 => c"invalid utf-8",
        QttStatus::ElaborationFailed => c"elaboration failed",
        QttStatus::RuntimeFailed => c"runtime failed",
        QttStatus::NotFound => c"not found",
        QttStatus::Internal => c"internal error",
    };
    s.as_ptr()
}
