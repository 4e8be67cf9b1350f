//! C interface to the eigenflow analysis.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `*_free` function. Every fallible call returns an
//! [`EfStatus`]; the message of the most recent failure on the calling
//! thread is available from [`ef_last_error`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use eigenflow::eigen::Sweep;
use eigenflow::error::Error;
use eigenflow::pipeline::{analyze, AnalysisConfig, AnalysisResult};
use eigenflow::sampled::{generate_circle_map, SampledSystem};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    LipschitzOverflow = 4,
    Internal = 5,
    Panic = 6,
}

/// A sampled system: points, a self-map on their indices and a density
/// constant.
pub struct EfSample(SampledSystem);

/// The outcome of an analysis.
pub struct EfResult(AnalysisResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: EfStatus, msg: impl Into<Vec<u8>>) -> EfStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> EfStatus {
    if e.is_lipschitz_overflow() {
        return EfStatus::LipschitzOverflow;
    }
    match e {
        Error::Sample(_) | Error::Config(_) | Error::Geometry(_) => EfStatus::InvalidInput,
        _ => EfStatus::Internal,
    }
}

fn guarded(f: impl FnOnce() -> EfStatus) -> EfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(EfStatus::Panic, "internal panic"),
    }
}

/// Message describing the last failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ef_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ef_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a sample from its JSON representation.
#[no_mangle]
pub unsafe extern "C" fn ef_sample_from_json(json: *const c_char, out: *mut *mut EfSample) -> EfStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return fail(EfStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(EfStatus::InvalidUtf8, "sample text is not UTF-8");
        };
        match SampledSystem::from_json(text) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(EfSample(s)));
                EfStatus::Ok
            }
            Err(e) => fail(EfStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Generates the noisy angle-doubling map on `n` circle points.
#[no_mangle]
pub unsafe extern "C" fn ef_sample_circle(n: usize, sigma: f64, seed: u64, out: *mut *mut EfSample) -> EfStatus {
    guarded(|| {
        if out.is_null() {
            return fail(EfStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        match generate_circle_map(n, sigma, seed) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(EfSample(s)));
                EfStatus::Ok
            }
            Err(e) => fail(EfStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Number of points in the sample, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ef_sample_len(sample: *const EfSample) -> usize {
    sample.as_ref().map_or(0, |s| s.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn ef_sample_free(sample: *mut EfSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Runs the analysis over `Z_prime`. The eigenvalues tested are every field
/// element for small primes and the detected candidates otherwise; pass
/// `theta <= 0` for the default significance fraction and `threads == 0`
/// for one thread.
#[no_mangle]
pub unsafe extern "C" fn ef_analyze(
    sample: *const EfSample,
    prime: u32,
    theta: f64,
    threads: u32,
    out: *mut *mut EfResult,
) -> EfStatus {
    guarded(|| {
        let (Some(sample), false) = (sample.as_ref(), out.is_null()) else {
            return fail(EfStatus::NullPointer, "null argument");
        };
        *out = ptr::null_mut();
        let defaults = AnalysisConfig::default();
        let cfg = AnalysisConfig {
            prime,
            sweep: Sweep::Auto(Vec::new()),
            theta: if theta > 0.0 { theta } else { defaults.theta },
            threads: threads.max(1) as usize,
            ..defaults
        };
        match analyze(&sample.0, &cfg) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(EfResult(r)));
                EfStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// The full result as JSON. Release the string with [`ef_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ef_result_json(result: *const EfResult) -> *mut c_char {
    let Some(r) = result.as_ref() else {
        set_error("null argument");
        return ptr::null_mut();
    };
    CString::new(r.0.to_json()).map_or(ptr::null_mut(), CString::into_raw)
}

/// Number of significant intervals across all tested eigenvalues.
#[no_mangle]
pub unsafe extern "C" fn ef_result_significant_count(result: *const EfResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.significant.len())
}

/// The `index`-th significant interval. Essential intervals report an
/// infinite death.
#[no_mangle]
pub unsafe extern "C" fn ef_result_significant(
    result: *const EfResult,
    index: usize,
    t: *mut u32,
    birth: *mut f64,
    death: *mut f64,
) -> EfStatus {
    let Some(r) = result.as_ref() else {
        return fail(EfStatus::NullPointer, "null argument");
    };
    if t.is_null() || birth.is_null() || death.is_null() {
        return fail(EfStatus::NullPointer, "null argument");
    }
    let Some(iv) = r.0.significant.get(index) else {
        return fail(EfStatus::InvalidInput, format!("index {index} out of range"));
    };
    *t = iv.t;
    *birth = iv.birth;
    *death = iv.death.unwrap_or(f64::INFINITY);
    EfStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn ef_result_free(result: *mut EfResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ef_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
