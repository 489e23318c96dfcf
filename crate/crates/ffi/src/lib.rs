//! C ABI for the synclcs toolkit.
//!
//! Systems are opaque [`SlcsSystem`] handles created by
//! [`slcs_system_from_json`] or [`slcs_system_builtin`] and released with
//! [`slcs_system_free`]. Commands write a JSON report into a string owned by
//! the library, released with [`slcs_string_free`]. Every fallible call
//! returns an [`SlcsStatus`]; on failure [`slcs_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use synclcs::cli::{self, GroupFormat, Outcome, RepSource};
use synclcs::system::{validate_system, SystemFile};
use synclcs::{Error, Limits, LinearSystem};

/// Status codes. Values 0 to 4 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlcsStatus {
    Ok = 0,
    /// A residual or verdict check failed; the report is still produced.
    CheckFailed = 1,
    /// The input is well-formed but invalid (non-prime modulus, shapes,
    /// non-solution).
    Invalid = 2,
    /// Malformed JSON, unknown names, I/O.
    Parse = 3,
    /// Enumeration cap or search budget exceeded.
    Budget = 4,
    NullPointer = 5,
    /// A string argument was not valid UTF-8.
    Utf8 = 6,
    /// An internal panic was caught at the boundary.
    Panic = 7,
}

/// An immutable linear system `A x = b` over Z_p.
pub struct SlcsSystem {
    inner: LinearSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_for(code: i32) -> SlcsStatus {
    match code {
        0 => SlcsStatus::Ok,
        1 => SlcsStatus::CheckFailed,
        2 => SlcsStatus::Invalid,
        3 => SlcsStatus::Parse,
        _ => SlcsStatus::Budget,
    }
}

fn from_error(e: &Error) -> (SlcsStatus, String) {
    (status_for(cli::exit_code_for(e)), e.to_string())
}

/// Runs `f`, recording any error message and converting panics.
fn guard(f: impl FnOnce() -> Result<SlcsStatus, (SlcsStatus, String)>) -> SlcsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SlcsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (SlcsStatus, String)> {
    if p.is_null() {
        return Err((SlcsStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (SlcsStatus::Utf8, "string argument is not UTF-8".into()))
}

unsafe fn system_arg<'a>(sys: *const SlcsSystem) -> Result<&'a LinearSystem, (SlcsStatus, String)> {
    sys.as_ref().map(|s| &s.inner).ok_or_else(|| (SlcsStatus::NullPointer, "null system handle".into()))
}

fn check_out<T>(out: *mut T) -> Result<(), (SlcsStatus, String)> {
    if out.is_null() {
        Err((SlcsStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Parses a system from its JSON form `{"p": .., "A": [[..]], "b": [..]}`.
/// Systems failing validation are rejected with `SLCS_STATUS_INVALID`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slcs_system_from_json(json: *const c_char, out: *mut *mut SlcsSystem) -> SlcsStatus {
    guard(|| {
        check_out(out)?;
        let text = str_arg(json)?;
        let file = SystemFile::from_json(text).map_err(|e| from_error(&e))?;
        let report = validate_system(&file);
        if !report.passed() {
            let failed: Vec<String> = report
                .items
                .iter()
                .filter(|i| i.status == synclcs::system::CheckStatus::Fail)
                .map(|i| format!("{}: {}", i.name, i.detail))
                .collect();
            return Err((SlcsStatus::Invalid, failed.join("; ")));
        }
        let inner = LinearSystem::from_file(&file).map_err(|e| from_error(&e))?;
        *out = Box::into_raw(Box::new(SlcsSystem { inner }));
        Ok(SlcsStatus::Ok)
    })
}

/// Creates a built-in system: `magic-square`, `one-eq` or `p3-demo`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slcs_system_builtin(name: *const c_char, out: *mut *mut SlcsSystem) -> SlcsStatus {
    guard(|| {
        check_out(out)?;
        let inner = synclcs::examples::builtin(str_arg(name)?).map_err(|e| from_error(&e))?;
        *out = Box::into_raw(Box::new(SlcsSystem { inner }));
        Ok(SlcsStatus::Ok)
    })
}

/// Releases a system. Null is ignored.
///
/// # Safety
/// `sys` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn slcs_system_free(sys: *mut SlcsSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// The modulus `p`, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn slcs_system_modulus(sys: *const SlcsSystem) -> u32 {
    sys.as_ref().map_or(0, |s| s.inner.p())
}

/// Number of equations `m`, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn slcs_system_rows(sys: *const SlcsSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.inner.m())
}

/// Number of variables `n`, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn slcs_system_cols(sys: *const SlcsSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.inner.n())
}

/// Whether `A x = b` has a solution over Z_p.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slcs_system_is_consistent(sys: *const SlcsSystem, out: *mut bool) -> SlcsStatus {
    guard(|| {
        check_out(out)?;
        *out = system_arg(sys)?.solve().is_consistent();
        Ok(SlcsStatus::Ok)
    })
}

/// `|S_i|` for the 1-based row `row`, without enumerating it.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slcs_system_row_solution_count(
    sys: *const SlcsSystem,
    row: usize,
    out: *mut u64,
) -> SlcsStatus {
    guard(|| {
        check_out(out)?;
        let set = system_arg(sys)?.row_affine_set(row).map_err(|e| from_error(&e))?;
        *out = set.map_or(0, |s| u64::try_from(s.cardinality()).unwrap_or(u64::MAX));
        Ok(SlcsStatus::Ok)
    })
}

/// SHA-256 of the canonical system JSON, as lowercase hex. Free the
/// result with [`slcs_string_free`].
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn slcs_system_digest(sys: *const SlcsSystem, out: *mut *mut c_char) -> SlcsStatus {
    guard(|| {
        check_out(out)?;
        *out = into_c_string(system_arg(sys)?.digest());
        Ok(SlcsStatus::Ok)
    })
}

unsafe fn run_report(
    sys: *const SlcsSystem,
    out: *mut *mut c_char,
    command: impl FnOnce(&LinearSystem, &Limits) -> synclcs::Result<Outcome>,
) -> SlcsStatus {
    guard(|| {
        check_out(out)?;
        let sys = system_arg(sys)?;
        let outcome = command(sys, &Limits::from_env()).map_err(|e| from_error(&e))?;
        *out = into_c_string(outcome.report.to_json());
        let status = status_for(outcome.exit_code);
        if status != SlcsStatus::Ok {
            let name = outcome.report.first_failure().map_or("unknown", |c| c.name.as_str());
            set_last_error(&format!("check failed: {name}"));
        }
        Ok(status)
    })
}

/// Supports, solution-set sizes, solvability and graph sizes.
///
/// # Safety
/// `sys` must be a live handle and `report` a valid pointer. When the
/// command runs to completion (`SLCS_STATUS_OK` or
/// `SLCS_STATUS_CHECK_FAILED`), `*report` receives a string to release
/// with [`slcs_string_free`].
#[no_mangle]
pub unsafe extern "C" fn slcs_analyze(sys: *const SlcsSystem, report: *mut *mut c_char) -> SlcsStatus {
    run_report(sys, report, cli::analyze)
}

/// Gaussian elimination and the best deterministic syncLCS strategy.
///
/// # Safety
/// As for [`slcs_analyze`].
#[no_mangle]
pub unsafe extern "C" fn slcs_solve(sys: *const SlcsSystem, report: *mut *mut c_char) -> SlcsStatus {
    run_report(sys, report, |s, l| cli::solve(s, None, l))
}

/// Isomorphism search between `G_{A,b}` and `G_{A,0}`.
///
/// # Safety
/// As for [`slcs_analyze`].
#[no_mangle]
pub unsafe extern "C" fn slcs_iso(sys: *const SlcsSystem, report: *mut *mut c_char) -> SlcsStatus {
    run_report(sys, report, cli::iso)
}

/// The solution group presentation, embedded in the report.
///
/// # Safety
/// As for [`slcs_analyze`].
#[no_mangle]
pub unsafe extern "C" fn slcs_group(sys: *const SlcsSystem, report: *mut *mut c_char) -> SlcsStatus {
    run_report(sys, report, |s, _| cli::group(s, GroupFormat::Json, None))
}

/// Representation checks. `source` is `pauli-ms`, `scalar:auto`,
/// `scalar:<x1,..,xn>` or a path to a matrix JSON file.
///
/// # Safety
/// As for [`slcs_analyze`]; `source` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn slcs_repcheck(
    sys: *const SlcsSystem,
    source: *const c_char,
    tol: f64,
    report: *mut *mut c_char,
) -> SlcsStatus {
    let source: RepSource = match str_arg(source).map(str::parse) {
        Ok(Ok(s)) => s,
        Ok(Err(e)) => return guard(|| Err(from_error(&e))),
        Err(e) => return guard(|| Err(e)),
    };
    run_report(sys, report, |s, l| cli::repcheck(s, &source, tol, l))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn slcs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message for the last failed call on this thread, or null. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn slcs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn slcs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
