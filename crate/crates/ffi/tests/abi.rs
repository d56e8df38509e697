use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gtl_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    gtl_string_free(s);
    out
}

unsafe fn parse(s: &str) -> *mut GtlFormula {
    let mut f = ptr::null_mut();
    assert_eq!(gtl_formula_parse(c(s).as_ptr(), &mut f), GtlStatus::Ok);
    f
}

unsafe fn last_error() -> String {
    CStr::from_ptr(gtl_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn parse_print_free() {
    unsafe {
        let f = parse("~p <=> q");
        let mut s = ptr::null_mut();
        assert_eq!(gtl_formula_to_string(f, &mut s), GtlStatus::Ok);
        assert_eq!(take(s), "((top <= p) => q) & (q => (top <= p))");
        assert!(gtl_last_error().is_null());
        gtl_formula_free(f);
        gtl_formula_free(ptr::null_mut());
    }
}

#[test]
fn parse_errors_carry_position() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(gtl_formula_parse(c("p &").as_ptr(), &mut f), GtlStatus::ParseError);
        assert!(f.is_null());
        assert!(last_error().contains("1:4"));
        assert_eq!(gtl_formula_parse(ptr::null(), &mut f), GtlStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(gtl_formula_parse(bad.as_ptr().cast(), &mut f), GtlStatus::InvalidUtf8);
    }
}

#[test]
fn decide_and_validate_witness() {
    unsafe {
        let f = parse("(p => q) | (q => p)");
        let mut valid = false;
        let mut w = ptr::null_mut();
        assert_eq!(gtl_decide(f, 0, &mut valid, &mut w), GtlStatus::Ok);
        assert!(valid && w.is_null());
        gtl_formula_free(f);

        let f = parse("X p => p");
        assert_eq!(gtl_decide(f, 0, &mut valid, &mut w), GtlStatus::Ok);
        assert!(!valid && !w.is_null());
        let mut violation = ptr::null_mut();
        assert_eq!(gtl_validate_quasimodel(w, &mut violation), GtlStatus::Ok);
        assert!(violation.is_null());
        gtl_string_free(w);

        assert_eq!(gtl_decide(f, 2, &mut valid, ptr::null_mut()), GtlStatus::BudgetExceeded);
        gtl_formula_free(f);
    }
}

#[test]
fn model_evaluation() {
    let real = c(r#"{"moments":["a","b"],"succ":{"a":"b","b":"b"},"val":{"p":{"a":"1","b":"1/2"}}}"#);
    let birel = c(r#"{"worlds":["0","1"],"moments":["t"],"succ":{"t":"t"},"val":{"p":[["0","t"]]}}"#);
    unsafe {
        let f = parse("F p");
        let mut v = ptr::null_mut();
        assert_eq!(gtl_real_eval(real.as_ptr(), f, c("b").as_ptr(), &mut v), GtlStatus::Ok);
        assert_eq!(take(v), "1/2");
        assert_eq!(gtl_real_eval(real.as_ptr(), f, c("z").as_ptr(), &mut v), GtlStatus::InvalidInput);
        gtl_formula_free(f);

        let f = parse("!!p => p");
        let mut holds = true;
        assert_eq!(gtl_birel_globally_true(birel.as_ptr(), f, &mut holds), GtlStatus::Ok);
        assert!(!holds);
        assert_eq!(gtl_real_globally_true(real.as_ptr(), f, &mut holds), GtlStatus::Ok);
        assert!(!holds);
        gtl_formula_free(f);
    }
}

#[test]
fn proof_checking_reports_line() {
    let good = c(r#"[{"formula":"p => p | q","by":{"axiom":"I.f"}},{"formula":"(p <= p) => q","by":{"dimpDis":1}}]"#);
    let bad = c(r#"[{"formula":"p => p | q","by":{"axiom":"I.f"}},{"formula":"(p <= q) => p","by":{"dimpDis":1}}]"#);
    unsafe {
        let mut line = 99;
        assert_eq!(gtl_check_proof(good.as_ptr(), &mut line), GtlStatus::Ok);
        assert_eq!(line, 0);
        assert_eq!(gtl_check_proof(bad.as_ptr(), &mut line), GtlStatus::Ok);
        assert_eq!(line, 2);
        assert!(last_error().starts_with("line 2"));
        assert_eq!(gtl_check_proof(c("[").as_ptr(), &mut line), GtlStatus::InvalidInput);
    }
}

#[test]
fn header_is_generated() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/gtl.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["GtlFormula", "GTL_STATUS_PARSE_ERROR", "gtl_decide", "gtl_check_proof", "gtl_last_error"] {
        assert!(text.contains(name), "{name}");
    }
}

/// Builds and runs a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libgtl_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("gtl_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
