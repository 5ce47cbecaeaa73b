use std::ffi::{CStr, CString};
use std::ptr;

use shintani_ffi::*;

const HAT_CFG: &str = include_str!("../../core/examples/q_sqrt5_hat.cfg");

fn last_error() -> String {
    unsafe { CStr::from_ptr(shintani_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn field_handles() {
    let coeffs = [-1i64, -1, 1];
    let order = [1usize, 0];
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(shintani_field_new(coeffs.as_ptr(), coeffs.len(), order.as_ptr(), &mut f), ShintaniStatus::Ok);
        assert_eq!(shintani_field_degree(f), 2);
        let q = CString::new("5").unwrap();
        let mut equal = false;
        let mut value = ptr::null_mut();
        assert_eq!(shintani_hat_verify(f, q.as_ptr(), 0, &mut equal, &mut value), ShintaniStatus::Ok);
        assert!(equal);
        assert_eq!(CStr::from_ptr(value).to_str().unwrap(), "[(+1,+1)]-[(+1,-1)]");
        shintani_string_free(value);
        shintani_field_free(f);
    }
}

#[test]
fn error_codes() {
    let mut f = ptr::null_mut();
    let reducible = [-4i64, 0, 1];
    unsafe {
        assert_eq!(shintani_field_new(reducible.as_ptr(), 3, ptr::null(), &mut f), ShintaniStatus::InvalidInput);
        assert!(last_error().contains("reducible"));
        assert_eq!(shintani_field_new(ptr::null(), 3, ptr::null(), &mut f), ShintaniStatus::NullPointer);
        let good = [-2i64, 0, 1];
        assert_eq!(shintani_field_new(good.as_ptr(), 3, ptr::null(), &mut f), ShintaniStatus::Ok);
        assert!(last_error().is_empty());
        let q = CString::new("zz").unwrap();
        let mut equal = false;
        let mut value = ptr::null_mut();
        assert_eq!(shintani_hat_verify(f, q.as_ptr(), 0, &mut equal, &mut value), ShintaniStatus::Parse);
        // ℚ(√2) has a fundamental unit of norm −1, but 5 is inert
        let q = CString::new("5").unwrap();
        assert_eq!(shintani_hat_verify(f, q.as_ptr(), 0, &mut equal, &mut value), ShintaniStatus::Unsupported);
        shintani_field_free(f);
        assert_eq!(shintani_field_degree(ptr::null()), 0);
    }
}

#[test]
fn run_reports() {
    let cfg = CString::new(HAT_CFG).unwrap();
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(shintani_run(cfg.as_ptr(), ShintaniCommand::Verify as u32, -1, &mut r), ShintaniStatus::Ok);
        assert_eq!(shintani_report_exit_code(r), 0);
        assert!(shintani_report_pass(r));
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(shintani_report_json(r)).to_str().unwrap()).unwrap();
        assert_eq!(json["result"]["value"], "[(+1,+1)]-[(+1,-1)]");
        shintani_report_free(r);

        let bad = CString::new("[field]\npoly = 3\n").unwrap();
        assert_eq!(shintani_run(bad.as_ptr(), ShintaniCommand::Theta as u32, 4, &mut r), ShintaniStatus::Ok);
        assert_eq!(shintani_report_exit_code(r), 2);
        shintani_report_free(r);

        assert_eq!(shintani_run(cfg.as_ptr(), 99, -1, &mut r), ShintaniStatus::InvalidInput);
        assert_eq!(shintani_run(cfg.as_ptr(), 0, -1, ptr::null_mut()), ShintaniStatus::NullPointer);
    }
}

#[test]
fn header_declares_the_api() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/shintani.h");
    let h = std::fs::read_to_string(path).unwrap();
    for name in ["shintani_field_new", "shintani_hat_verify", "shintani_run", "shintani_report_free", "SHINTANI_STATUS_HYPOTHESIS", "typedef struct ShintaniReport"] {
        assert!(h.contains(name), "{name} missing from header");
    }
    if let Ok(out) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", path]).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
