//! C interface to `deltakit`.
//!
//! Objects are opaque handles released with the matching `*_free` function. Every fallible call
//! returns a [`DkStatus`]; on failure [`dk_last_error_message`] describes the error.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use deltakit::cli::{tblock_reports, Cache, CapsArg, CliError, SpecFile};
use deltakit::groups::FiniteAbelianGroup;
use deltakit::tblock::{thm33_max_delta, TBlockSpec, DEFAULT_REGION_LIMIT};
use deltakit::zerosum::davenport_of_group;
use deltakit::Error;

/// A finite abelian group.
pub struct DkGroup(FiniteAbelianGroup);

/// A T-block monoid read from a spec document.
pub struct DkTBlock {
    file: SpecFile,
    spec: TBlockSpec,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    Unsupported = 4,
    LimitExceeded = 5,
    Panic = 6,
}

/// Region caps; a zero field keeps the spec or default value.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct DkCaps {
    pub seq_len_cap: u32,
    pub exp_cap: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl std::fmt::Display) {
    let text = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn fail(status: DkStatus, msg: impl std::fmt::Display) -> DkStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> DkStatus {
    match e {
        Error::RegionTooLarge { .. } | Error::GroupTooLarge { .. } => DkStatus::LimitExceeded,
        Error::NeedsOrderTwo(_) | Error::NoComponents => DkStatus::Unsupported,
        _ => DkStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> DkStatus) -> DkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == DkStatus::Ok {
                set_error("");
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(DkStatus::Panic, format!("internal error: {msg}"))
        }
    }
}

/// Reads `len` items from `data`; a null pointer is allowed only when `len` is 0.
unsafe fn slice<'a, T>(data: *const T, len: usize) -> Option<&'a [T]> {
    if len == 0 {
        Some(&[])
    } else if data.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(data, len))
    }
}

fn store<T>(out: *mut *mut T, value: T) {
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

/// Message for the last failed call on this thread; empty after a success. Owned by the library.
#[no_mangle]
pub extern "C" fn dk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Group from invariant factors `n_1 | n_2 | ... | n_r`, each above 1.
///
/// # Safety
/// `factors` must point to `len` values (or be null with `len == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_group_new(
    factors: *const u32,
    len: usize,
    out: *mut *mut DkGroup,
) -> DkStatus {
    guard(|| {
        if out.is_null() {
            return fail(DkStatus::NullPointer, "out is null");
        }
        let Some(f) = slice(factors, len) else {
            return fail(DkStatus::NullPointer, "factors is null");
        };
        match FiniteAbelianGroup::new(f.to_vec()) {
            Ok(g) => {
                store(out, DkGroup(g));
                DkStatus::Ok
            }
            Err(e) => fail(status_of(&e), e),
        }
    })
}

/// Group `C_m1 + ... + C_mk` for arbitrary positive moduli, reduced to invariant factors.
///
/// # Safety
/// As for [`dk_group_new`].
#[no_mangle]
pub unsafe extern "C" fn dk_group_canonicalize(
    moduli: *const u64,
    len: usize,
    out: *mut *mut DkGroup,
) -> DkStatus {
    guard(|| {
        if out.is_null() {
            return fail(DkStatus::NullPointer, "out is null");
        }
        let Some(m) = slice(moduli, len) else {
            return fail(DkStatus::NullPointer, "moduli is null");
        };
        match FiniteAbelianGroup::canonicalize(m) {
            Ok(g) => {
                store(out, DkGroup(g));
                DkStatus::Ok
            }
            Err(e) => fail(status_of(&e), e),
        }
    })
}

/// # Safety
/// `group` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dk_group_free(group: *mut DkGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

unsafe fn group_query<T>(
    group: *const DkGroup,
    out: *mut T,
    f: impl FnOnce(&FiniteAbelianGroup) -> T,
) -> DkStatus {
    guard(|| match (group.as_ref(), out.is_null()) {
        (Some(g), false) => {
            *out = f(&g.0);
            DkStatus::Ok
        }
        _ => fail(DkStatus::NullPointer, "group or out is null"),
    })
}

/// # Safety
/// `group` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_group_order(group: *const DkGroup, out: *mut u64) -> DkStatus {
    group_query(group, out, |g| g.order() as u64)
}

/// # Safety
/// As for [`dk_group_order`].
#[no_mangle]
pub unsafe extern "C" fn dk_group_exponent(group: *const DkGroup, out: *mut u32) -> DkStatus {
    group_query(group, out, |g| g.exponent())
}

/// `1 + Σ (n_i - 1)`.
///
/// # Safety
/// As for [`dk_group_order`].
#[no_mangle]
pub unsafe extern "C" fn dk_group_d_star(group: *const DkGroup, out: *mut u32) -> DkStatus {
    group_query(group, out, |g| g.d_star())
}

/// Davenport constant, computed from the atoms of `B(G)`.
///
/// # Safety
/// As for [`dk_group_order`].
#[no_mangle]
pub unsafe extern "C" fn dk_group_davenport(group: *const DkGroup, out: *mut u32) -> DkStatus {
    group_query(group, out, davenport_of_group)
}

/// Parses a spec document (JSON, UTF-8, NUL-terminated).
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_tblock_from_json(
    json: *const c_char,
    out: *mut *mut DkTBlock,
) -> DkStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(DkStatus::NullPointer, "json or out is null");
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(DkStatus::ParseError, "spec is not UTF-8");
        };
        let file = match SpecFile::parse(text) {
            Ok(f) => f,
            Err(e) => return fail(DkStatus::ParseError, e),
        };
        match file.to_spec() {
            Ok(spec) => {
                store(out, DkTBlock { file, spec });
                DkStatus::Ok
            }
            Err(e) => fail(status_of(&e), e),
        }
    })
}

/// # Safety
/// `tblock` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dk_tblock_free(tblock: *mut DkTBlock) {
    if !tblock.is_null() {
        drop(Box::from_raw(tblock));
    }
}

/// Predicted maximum distance for a class group of order 2; `UNSUPPORTED` otherwise.
///
/// # Safety
/// `tblock` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_tblock_max_delta_prediction(
    tblock: *const DkTBlock,
    out: *mut u32,
) -> DkStatus {
    guard(|| {
        let (Some(t), false) = (tblock.as_ref(), out.is_null()) else {
            return fail(DkStatus::NullPointer, "tblock or out is null");
        };
        match thm33_max_delta(&t.spec) {
            Ok(m) => {
                *out = m;
                DkStatus::Ok
            }
            Err(e) => fail(status_of(&e), e),
        }
    })
}

/// Scans the monoid and writes a JSON array of reports to `*out_json`, to be released with
/// [`dk_string_free`]. `caps` may be null.
///
/// # Safety
/// `tblock` must be a live handle; `caps` null or readable; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn dk_tblock_scan_json(
    tblock: *const DkTBlock,
    caps: *const DkCaps,
    out_json: *mut *mut c_char,
) -> DkStatus {
    guard(|| {
        let (Some(t), false) = (tblock.as_ref(), out_json.is_null()) else {
            return fail(DkStatus::NullPointer, "tblock or out_json is null");
        };
        let caps = caps.as_ref().copied().unwrap_or_default();
        let arg = CapsArg {
            seq: (caps.seq_len_cap > 0).then_some(caps.seq_len_cap as usize),
            exp: (caps.exp_cap > 0).then_some(caps.exp_cap),
        };
        match tblock_reports(
            &t.file,
            arg,
            false,
            DEFAULT_REGION_LIMIT,
            &Cache::disabled(),
        ) {
            Ok(reports) => {
                let text = serde_json::to_string(&reports).expect("reports serialize");
                *out_json = CString::new(text).expect("JSON has no NUL").into_raw();
                DkStatus::Ok
            }
            Err(CliError::Compute(e)) => fail(status_of(&e), e),
            Err(e) => fail(DkStatus::InvalidArgument, e),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
