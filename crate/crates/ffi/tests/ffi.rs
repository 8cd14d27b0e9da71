use qtt_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Takes ownership of a returned string.
unsafe fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    qtt_string_free(p);
    s
}

unsafe fn last_error(s: *const QttSession) -> String {
    CStr::from_ptr(qtt_last_error(s)).to_str().unwrap().to_string()
}

const GREETING: &str = "id_explicit : (0 a : Type) -> a -> a\nid_explicit a x = x\n\nthree : Nat\nthree = S (S (S Z))\n";

#[test]
fn session_lifecycle() {
    unsafe {
        let s = qtt_session_new();
        assert!(!s.is_null());
        assert_eq!(qtt_load_source(s, c("main").as_ptr(), c(GREETING).as_ptr()), QttStatus::Ok);

        let mut out = ptr::null_mut();
        assert_eq!(qtt_type_of(s, c("id_explicit").as_ptr(), &mut out), QttStatus::Ok);
        assert_eq!(take(out), "id_explicit : (0 a : Type) -> a -> a");

        assert_eq!(qtt_normalize(s, c("id_explicit Nat three").as_ptr(), &mut out), QttStatus::Ok);
        assert_eq!(take(out), "3");

        assert_eq!(qtt_holes(s, &mut out), QttStatus::Ok);
        assert_eq!(take(out), "no holes\n");

        assert_eq!(qtt_dump_erased(s, c("id_explicit").as_ptr(), &mut out), QttStatus::Ok);
        assert_eq!(take(out), "id_explicit arg1 = arg1\n-- parameters: 1, checkErased: true\n");

        qtt_session_free(s);
        qtt_session_free(ptr::null_mut());
    }
}

#[test]
fn running_a_corpus_program() {
    unsafe {
        let s = qtt_session_new();
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus/atm.qtt");
        assert_eq!(qtt_load_file(s, c(path).as_ptr()), QttStatus::Ok, "{}", last_error(s));
        let mut out = ptr::null_mut();
        assert_eq!(qtt_run(s, c("runATM").as_ptr(), c("100\n").as_ptr(), &mut out), QttStatus::Ok);
        assert!(take(out).contains("Dispensing 100\n"));
        assert_eq!(qtt_run(s, c("nope").as_ptr(), ptr::null(), &mut out), QttStatus::NotFound);
        assert!(out.is_null());
        assert_eq!(last_error(s), "nope is not defined");
        qtt_session_free(s);
    }
}

#[test]
fn errors_are_reported_by_code() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(qtt_type_of(ptr::null_mut(), c("Z").as_ptr(), &mut out), QttStatus::NullArgument);
        let s = qtt_session_new();
        assert_eq!(qtt_type_of(s, ptr::null(), &mut out), QttStatus::NullArgument);
        assert_eq!(qtt_type_of(s, c("Z").as_ptr(), ptr::null_mut()), QttStatus::NullArgument);

        let dup = "dup : (1 x : a) -> (a, a)\ndup x = (x, x)\n";
        assert_eq!(qtt_load_source(s, c("dup").as_ptr(), c(dup).as_ptr()), QttStatus::ElaborationFailed);
        assert!(last_error(s).contains("There are 2 uses of linear name x"), "{}", last_error(s));
        // The failed module left nothing behind.
        assert_eq!(qtt_type_of(s, c("dup").as_ptr(), &mut out), QttStatus::ElaborationFailed);

        assert_eq!(qtt_dump_erased(s, c("missing").as_ptr(), &mut out), QttStatus::NotFound);
        let bad = [0xffu8, 0];
        assert_eq!(qtt_normalize(s, bad.as_ptr() as *const c_char, &mut out), QttStatus::InvalidUtf8);
        assert_eq!(qtt_load_file(s, c("/no/such/file.qtt").as_ptr()), QttStatus::ElaborationFailed);
        qtt_session_free(s);
    }
}

#[test]
fn status_names() {
    let name = |st| unsafe { CStr::from_ptr(qtt_status_name(st)).to_str().unwrap() };
    assert_eq!(name(QttStatus::Ok), "ok");
    assert_eq!(name(QttStatus::NotFound), "not found");
    assert_eq!(name(QttStatus::ElaborationFailed), "elaboration failed");
    assert_eq!(QttStatus::Internal as i32, 6);
}

#[test]
fn header_declares_the_interface() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::fs::read_to_string(format!("{dir}/include/qtt.h")).unwrap();
    for f in ["qtt_session_new", "qtt_session_free", "qtt_last_error", "qtt_load_source", "qtt_load_file", "qtt_type_of", "qtt_normalize", "qtt_holes", "qtt_dump_erased", "qtt_run", "qtt_string_free", "qtt_status_name"] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct QttSession QttSession;"));
    assert!(header.contains("QTT_STATUS_NOT_FOUND = 5,"));

    // Compile a small client against the header when a C compiler is around.
    let Ok(cc) = which_cc() else { return };
    let tmp = std::env::temp_dir().join(format!("qtt-ffi-{}.c", std::process::id()));
    std::fs::write(
        &tmp,
        "#include \"qtt.h\"\nint main(void) {\n  QttSession *s = qtt_session_new();\n  char *out = 0;\n  QttStatus st = qtt_type_of(s, \"Z\", &out);\n  qtt_string_free(out);\n  qtt_session_free(s);\n  return st == QTT_STATUS_OK ? 0 : 1;\n}\n",
    )
    .unwrap();
    let o = std::process::Command::new(cc).args(["-fsyntax-only", "-Wall", "-Werror", "-I", &format!("{dir}/include")]).arg(&tmp).output().unwrap();
    std::fs::remove_file(&tmp).unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
