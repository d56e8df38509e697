//! C interface to `gtl`.
//!
//! Formulas are opaque handles created by [`gtl_formula_parse`] and released
//! with [`gtl_formula_free`]. Models, proofs and quasimodels cross the
//! boundary as JSON text in the same formats the command line reads.
//! Every call returns a [`GtlStatus`]; on failure a message is available
//! from [`gtl_last_error`] until the next call on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! must be released with [`gtl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gtl::birel::BiRelModel;
use gtl::calculus::{check_proof, Proof};
use gtl::decide::{decide_with, Options, Status};
use gtl::labelled::LabelledSystem;
use gtl::real::RealModel;
use gtl::{Error, Formula};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GtlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    BudgetExceeded = 5,
    Internal = 6,
    Panic = 7,
}

/// A parsed formula.
pub struct GtlFormula(Formula);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(GtlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => GtlStatus::ParseError,
            Error::Budget { .. } | Error::SigmaTooLarge(..) => GtlStatus::BudgetExceeded,
            Error::WitnessRejected(_) => GtlStatus::Internal,
            _ => GtlStatus::InvalidInput,
        };
        Failure(code, e.to_string())
    }
}

impl From<gtl::ParseError> for Failure {
    fn from(e: gtl::ParseError) -> Self {
        Failure(GtlStatus::ParseError, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GtlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GtlStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside gtl".into());
            GtlStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(GtlStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(GtlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn formula<'a>(f: *const GtlFormula) -> Result<&'a Formula, Failure> {
    f.as_ref().map(|f| &f.0).ok_or_else(|| Failure(GtlStatus::NullArgument, "formula is null".into()))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(GtlStatus::NullArgument, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).expect("gtl output has no nul bytes").into_raw()
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn gtl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gtl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn gtl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gtl_formula_parse(text: *const c_char, out: *mut *mut GtlFormula) -> GtlStatus {
    guard(|| {
        let f = gtl::parse(self::text(text, "text")?)?;
        put(out, Box::into_raw(Box::new(GtlFormula(f))), "out")
    })
}

/// # Safety
/// `f` must be null or a handle from [`gtl_formula_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gtl_formula_free(f: *mut GtlFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Canonical text of a formula, sugar expanded.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gtl_formula_to_string(f: *const GtlFormula, out: *mut *mut c_char) -> GtlStatus {
    guard(|| put(out, owned(formula(f)?.to_string()), "out"))
}

/// Decides validity with the given cap on the closure size (0 selects the
/// default). When the formula is falsifiable and `witness_json` is not null,
/// the witness quasimodel is written there; otherwise it is set to null.
///
/// # Safety
/// `f` must be a live handle, `valid` writable, `witness_json` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gtl_decide(
    f: *const GtlFormula,
    budget: usize,
    valid: *mut bool,
    witness_json: *mut *mut c_char,
) -> GtlStatus {
    guard(|| {
        let options = if budget == 0 { Options::default() } else { Options { budget } };
        let v = decide_with(formula(f)?, options)?;
        if !witness_json.is_null() {
            witness_json.write(v.witness.map_or(ptr::null_mut(), |w| owned(w.to_json())));
        }
        put(valid, v.status == Status::Valid, "valid")
    })
}

/// Value of `f` at `moment` in a real model, as `"num/den"` text.
///
/// # Safety
/// String arguments must be nul-terminated, `f` live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gtl_real_eval(
    model_json: *const c_char,
    f: *const GtlFormula,
    moment: *const c_char,
    out: *mut *mut c_char,
) -> GtlStatus {
    guard(|| {
        let m = RealModel::from_json(text(model_json, "model_json")?)?;
        let v = gtl::real::eval_real(&m, formula(f)?, text(moment, "moment")?)?;
        put(out, owned(v.to_string()), "out")
    })
}

/// Whether `f` takes value 1 at every moment of a real model.
///
/// # Safety
/// `model_json` must be nul-terminated, `f` live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gtl_real_globally_true(
    model_json: *const c_char,
    f: *const GtlFormula,
    out: *mut bool,
) -> GtlStatus {
    guard(|| {
        let m = RealModel::from_json(text(model_json, "model_json")?)?;
        put(out, m.globally_true(formula(f)?), "out")
    })
}

/// Whether `f` holds at every point of a bi-relational model.
///
/// # Safety
/// `model_json` must be nul-terminated, `f` live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gtl_birel_globally_true(
    model_json: *const c_char,
    f: *const GtlFormula,
    out: *mut bool,
) -> GtlStatus {
    guard(|| {
        let m = BiRelModel::from_json(text(model_json, "model_json")?)?;
        put(out, m.globally_true(formula(f)?), "out")
    })
}

/// Checks a proof. `failed_line` receives 0 when the proof checks, else the
/// 1-based number of the first bad line (with the reason in
/// [`gtl_last_error`]).
///
/// # Safety
/// `proof_json` must be nul-terminated and `failed_line` writable.
#[no_mangle]
pub unsafe extern "C" fn gtl_check_proof(proof_json: *const c_char, failed_line: *mut usize) -> GtlStatus {
    let mut reason = None;
    let status = guard(|| {
        let p = Proof::from_json(text(proof_json, "proof_json")?)?;
        let line = match check_proof(&p) {
            Ok(()) => 0,
            Err(e) => {
                let n = e.line;
                reason = Some(e.to_string());
                n
            }
        };
        put(failed_line, line, "failed_line")
    });
    if let Some(r) = reason {
        set_error(r);
    }
    status
}

/// Validates a quasimodel. `violation` receives null when every condition
/// holds, else a description of the first violated one.
///
/// # Safety
/// `json` must be nul-terminated and `violation` writable.
#[no_mangle]
pub unsafe extern "C" fn gtl_validate_quasimodel(json: *const c_char, violation: *mut *mut c_char) -> GtlStatus {
    guard(|| {
        let s = LabelledSystem::from_json(text(json, "json")?)?;
        let v = s.validate_quasimodel().err().map_or(ptr::null_mut(), |v| owned(v.to_string()));
        put(violation, v, "violation")
    })
}
