//! C ABI over the `beliefmerge` engine.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Every fallible call returns a
//! [`BmStatus`]; on failure [`bm_last_error_message`] describes the error
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use beliefmerge::distance::DistanceKind;
use beliefmerge::formula::Universe;
use beliefmerge::io::{result_json, InstanceFile, Loaded};
use beliefmerge::maxcons::maxcons;
use beliefmerge::merge::MergeResult;
use beliefmerge::weights::WeightScheme;
use beliefmerge::Error;

/// Status codes. Values 1 to 3 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BmStatus {
    Ok = 0,
    /// Null pointer or non-UTF-8 string argument.
    Usage = 1,
    InvalidInput = 2,
    ResourceLimit = 3,
    /// A panic was caught at the boundary.
    Internal = 4,
}

/// A parsed and validated instance.
pub struct BmInstance {
    loaded: Loaded,
}

/// Models selected by a merge.
pub struct BmResult {
    universe: Universe,
    result: MergeResult,
    with_witness: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(BmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            3 => BmStatus::ResourceLimit,
            _ => BmStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn usage(msg: &str) -> Failure {
    Failure(BmStatus::Usage, msg.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BmStatus::Internal
        }
    }
}

unsafe fn opt_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Some)
        .map_err(|_| usage(&format!("{what} is not valid UTF-8")))
}

unsafe fn req_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    opt_str(p, what)?.ok_or_else(|| usage(&format!("{what} is null")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul bytes").into_raw()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn bm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses an instance from JSON text.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn bm_instance_from_json(json: *const c_char, out: *mut *mut BmInstance) -> BmStatus {
    guard(|| {
        if out.is_null() {
            return Err(usage("out is null"));
        }
        *out = ptr::null_mut();
        let text = req_str(json, "json")?;
        let loaded = InstanceFile::from_json(text)?.load()?;
        *out = Box::into_raw(Box::new(BmInstance { loaded }));
        Ok(())
    })
}

/// # Safety
/// `inst` must be null or a handle from [`bm_instance_from_json`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn bm_instance_free(inst: *mut BmInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn bm_instance_variable_count(inst: *const BmInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.loaded.universe.len())
}

/// Merges the instance. Null `scheme` or `distance` falls back to the
/// instance file's values, then to `all` and `hamming`.
///
/// # Safety
/// `inst` must be a live instance handle; `scheme` and `distance` null or
/// NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bm_merge(
    inst: *const BmInstance,
    scheme: *const c_char,
    distance: *const c_char,
    out: *mut *mut BmResult,
) -> BmStatus {
    guard(|| {
        if out.is_null() {
            return Err(usage("out is null"));
        }
        *out = ptr::null_mut();
        let inst = inst.as_ref().ok_or_else(|| usage("instance is null"))?;
        let loaded = &inst.loaded;
        let kind = match opt_str(distance, "distance")? {
            Some(d) => DistanceKind::parse(d)?,
            None => loaded.distance.clone().unwrap_or(DistanceKind::Hamming),
        };
        let scheme = match opt_str(scheme, "scheme")? {
            Some(s) => WeightScheme::parse(s)?,
            None => loaded.scheme.clone().unwrap_or(WeightScheme::AllPositive),
        };
        let result = loaded.merge(&scheme, &kind)?;
        *out = Box::into_raw(Box::new(BmResult {
            universe: loaded.universe.clone(),
            result,
            with_witness: scheme == WeightScheme::AllPositive,
        }));
        Ok(())
    })
}

/// Number of selected models, or 0 for a null handle.
///
/// # Safety
/// `res` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn bm_result_model_count(res: *const BmResult) -> usize {
    res.as_ref().map_or(0, |r| r.result.models.len())
}

/// Serializes the result as `{"models":[{"literals":[..],"witness":..}]}`.
/// Free the string with [`bm_string_free`].
///
/// # Safety
/// `res` must be a live result handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bm_result_to_json(res: *const BmResult, out: *mut *mut c_char) -> BmStatus {
    guard(|| {
        if out.is_null() {
            return Err(usage("out is null"));
        }
        *out = ptr::null_mut();
        let r = res.as_ref().ok_or_else(|| usage("result is null"))?;
        *out = into_c_string(result_json(&r.universe, &r.result, r.with_witness).to_string());
        Ok(())
    })
}

/// # Safety
/// `res` must be null or a result handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_result_free(res: *mut BmResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Maximal consistent subsets as `{"maxcons":[[1,3],...]}` with 1-based
/// formula indices. Free the string with [`bm_string_free`].
///
/// # Safety
/// `inst` must be a live instance handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bm_maxcons_json(inst: *const BmInstance, out: *mut *mut c_char) -> BmStatus {
    guard(|| {
        if out.is_null() {
            return Err(usage("out is null"));
        }
        *out = ptr::null_mut();
        let inst = inst.as_ref().ok_or_else(|| usage("instance is null"))?;
        let cons = maxcons(&inst.loaded.flat_instance()?)?;
        let lists: Vec<String> = cons
            .iter()
            .map(|c| {
                let idx: Vec<String> = c.indices.iter().map(|i| (i + 1).to_string()).collect();
                format!("[{}]", idx.join(","))
            })
            .collect();
        *out = into_c_string(format!("{{\"maxcons\":[{}]}}", lists.join(",")));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
