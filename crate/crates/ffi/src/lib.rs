//! C ABI over the shintani crate. Handles are opaque; every call returns a status code and
//! the message of the last failure on the calling thread is available from
//! `shintani_last_error`. Pointers passed in must be null or valid for the stated use.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shintani::cli::{run, Command, Overrides};
use shintani::exactfield::prime::parse_prime;
use shintani::exactfield::TotallyRealField;
use shintani::suite::SuiteSize;
use shintani::theta_reg::{verify_hat, HatOptions, HatSpec};
use shintani::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShintaniStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Unsupported = 5,
    Hypothesis = 6,
    Numerical = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShintaniCommand {
    Pair = 0,
    Theta = 1,
    Regulator = 2,
    RegulatorHat = 3,
    HatTheta = 4,
    Verify = 5,
    Suite = 6,
}

/// A totally real number field.
pub struct ShintaniField {
    field: TotallyRealField,
}

/// A JSON run report.
pub struct ShintaniReport {
    json: CString,
    exit_code: i32,
    pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ShintaniStatus {
    match e {
        Error::Parse(_) => ShintaniStatus::Parse,
        Error::InvalidInput(_) | Error::DivisionByZero => ShintaniStatus::InvalidInput,
        Error::Unsupported(_) => ShintaniStatus::Unsupported,
        Error::Hypothesis { .. } | Error::NotSmooth { .. } => ShintaniStatus::Hypothesis,
        Error::Degenerate(_) | Error::RefinementCap(_) | Error::PeriodCap(_) | Error::Overflow(_) => ShintaniStatus::Numerical,
        Error::Internal(_) => ShintaniStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (ShintaniStatus, String)>) -> ShintaniStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ShintaniStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("panic inside the library");
            ShintaniStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (ShintaniStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (ShintaniStatus, String)> {
    if p.is_null() {
        return Err((ShintaniStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (ShintaniStatus::InvalidUtf8, "string is not UTF-8".into()))
}

fn null() -> (ShintaniStatus, String) {
    (ShintaniStatus::NullPointer, "null pointer".into())
}

/// Message of the last failed call on this thread; empty after a success. Owned by the library.
#[no_mangle]
pub extern "C" fn shintani_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Field of a root of the monic polynomial with `len` coefficients, constant term first.
/// `place_order` may be null, otherwise it has `degree` entries.
/// `coeffs` must point to `len` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shintani_field_new(coeffs: *const i64, len: usize, place_order: *const usize, out: *mut *mut ShintaniField) -> ShintaniStatus {
    guard(|| {
        if coeffs.is_null() || out.is_null() {
            return Err(null());
        }
        let c = std::slice::from_raw_parts(coeffs, len);
        let mut field = TotallyRealField::new(c).map_err(lib_err)?;
        if !place_order.is_null() {
            let order = std::slice::from_raw_parts(place_order, field.degree());
            field = field.with_place_order(order).map_err(lib_err)?;
        }
        *out = Box::into_raw(Box::new(ShintaniField { field }));
        Ok(())
    })
}

/// `field` must come from `shintani_field_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn shintani_field_free(field: *mut ShintaniField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn shintani_field_degree(field: *const ShintaniField) -> usize {
    field.as_ref().map_or(0, |f| f.field.degree())
}

/// Checks b₀ ≡ R̂_𝔮 for S = S_∞, T = {𝔮}, M = 𝔽_𝔮^× and v₀ = inf`v0`. On success `*equal`
/// is set and `*value` receives b₀ as a string to be released with `shintani_string_free`.
/// `field` must be a live handle, `q` a NUL-terminated prime label, `equal` and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn shintani_hat_verify(
    field: *const ShintaniField,
    q: *const c_char,
    v0: usize,
    equal: *mut bool,
    value: *mut *mut c_char,
) -> ShintaniStatus {
    guard(|| {
        let f = field.as_ref().ok_or_else(null)?;
        if equal.is_null() || value.is_null() {
            return Err(null());
        }
        let qp = parse_prime(&f.field, text(q)?).map_err(lib_err)?;
        let spec = HatSpec { field: f.field.clone(), m: (1..qp.p).collect(), q: qp, v0 };
        let rep = verify_hat(&spec, &HatOptions::default()).map_err(lib_err)?;
        *equal = rep.equal;
        *value = CString::new(rep.theta.b0.to_string()).map_err(|_| (ShintaniStatus::Internal, "NUL in output".into()))?.into_raw();
        Ok(())
    })
}

/// Runs a `ShintaniCommand` on a TOML configuration (null for `Suite`). `seed < 0` keeps the configured seed.
/// A report is produced even when the computation fails; inspect its exit code.
/// `config` must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shintani_run(config: *const c_char, command: u32, seed: i64, out: *mut *mut ShintaniReport) -> ShintaniStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let cfg = if config.is_null() { None } else { Some(text(config)?) };
        let cmd = match command {
            c if c == ShintaniCommand::Pair as u32 => Command::Pair,
            c if c == ShintaniCommand::Theta as u32 => Command::Theta,
            c if c == ShintaniCommand::Regulator as u32 => Command::Regulator { hat: false },
            c if c == ShintaniCommand::RegulatorHat as u32 => Command::Regulator { hat: true },
            c if c == ShintaniCommand::HatTheta as u32 => Command::HatTheta,
            c if c == ShintaniCommand::Verify as u32 => Command::Verify,
            c if c == ShintaniCommand::Suite as u32 => Command::Suite(SuiteSize::Small),
            c => return Err((ShintaniStatus::InvalidInput, format!("unknown command {c}"))),
        };
        let ov = Overrides { seed: u64::try_from(seed).ok(), precision: None };
        let r = run(cfg, cmd, ov);
        let json = CString::new(r.to_json()).map_err(|_| (ShintaniStatus::Internal, "NUL in report".into()))?;
        *out = Box::into_raw(Box::new(ShintaniReport { json, exit_code: r.exit_code, pass: r.pass }));
        Ok(())
    })
}

/// JSON text of the report, owned by the report.
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn shintani_report_json(report: *const ShintaniReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// 0 on success, 1 on a mathematical violation, 2 on a usage or configuration error.
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn shintani_report_exit_code(report: *const ShintaniReport) -> i32 {
    report.as_ref().map_or(2, |r| r.exit_code)
}

/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn shintani_report_pass(report: *const ShintaniReport) -> bool {
    report.as_ref().is_some_and(|r| r.pass)
}

/// `report` must come from `shintani_run` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn shintani_report_free(report: *mut ShintaniReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn shintani_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
