//! C ABI over `schublci`.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free`. Strings returned through `char **` are
//! NUL-terminated UTF-8 and must be released with `schublci_string_free`.
//! Every fallible call returns a `SchublciStatus`; the message for the most
//! recent failure on the calling thread is available from
//! `schublci_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use schublci::classify::{classify, SingularityReport};
use schublci::diagram::{inclusion_level, InclusionLevel};
use schublci::ideal::minimal_generators;
use schublci::suites::{run_suite, Suite, SuiteOptions};
use schublci::{Error, Permutation};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchublciStatus {
    Ok = 0,
    Parse = 1,
    NotLci = 2,
    Budget = 3,
    Size = 4,
    Range = 5,
    NotEssential = 6,
    Precondition = 7,
    Pattern = 8,
    Family = 9,
    Minor = 10,
    Division = 11,
    Degree = 12,
    NullPointer = 13,
    InvalidUtf8 = 14,
    VerificationFailed = 15,
    Panic = 16,
}

impl From<&Error> for SchublciStatus {
    fn from(e: &Error) -> Self {
        match e.code() {
            "E_PARSE" => SchublciStatus::Parse,
            "E_NOT_LCI" => SchublciStatus::NotLci,
            "E_BUDGET" => SchublciStatus::Budget,
            "E_SIZE" => SchublciStatus::Size,
            "E_RANGE" => SchublciStatus::Range,
            "E_NOT_ESSENTIAL" => SchublciStatus::NotEssential,
            "E_PRECONDITION" => SchublciStatus::Precondition,
            "E_PATTERN" => SchublciStatus::Pattern,
            "E_FAMILY" => SchublciStatus::Family,
            "E_MINOR" => SchublciStatus::Minor,
            "E_DIVISION" => SchublciStatus::Division,
            _ => SchublciStatus::Degree,
        }
    }
}

/// Singularity flags of a classified permutation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SchublciFlags {
    pub smooth: bool,
    pub factorial: bool,
    pub dbi: bool,
    pub lci: bool,
    pub matrix_schubert_lci: bool,
}

/// Inclusion level of the essential set.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchublciLevel {
    Dbi = 0,
    AdbiOnly = 1,
    Neither = 2,
}

/// Opaque permutation handle.
pub struct SchublciPerm(Permutation);

/// Opaque classification report handle.
pub struct SchublciReport(SingularityReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

type Outcome = Result<(), (SchublciStatus, String)>;

fn fail(status: SchublciStatus, msg: impl Into<String>) -> Outcome {
    Err((status, msg.into()))
}

fn lib_err(e: Error) -> (SchublciStatus, String) {
    (SchublciStatus::from(&e), e.to_string())
}

fn guard(f: impl FnOnce() -> Outcome + UnwindSafe) -> SchublciStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => {
            set_last_error("");
            SchublciStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SchublciStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (SchublciStatus, String)> {
    if s.is_null() {
        return Err((SchublciStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| (SchublciStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (SchublciStatus, String)> {
    p.as_ref()
        .ok_or((SchublciStatus::NullPointer, "null handle".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return fail(SchublciStatus::NullPointer, "null output pointer");
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}

/// Stable name of a status, e.g. `"E_NOT_LCI"`. The pointer is static.
#[no_mangle]
pub extern "C" fn schublci_status_name(status: SchublciStatus) -> *const c_char {
    let s: &'static CStr = match status {
        SchublciStatus::Ok => c"OK",
        SchublciStatus::Parse => c"E_PARSE",
        SchublciStatus::NotLci => c"E_NOT_LCI",
        SchublciStatus::Budget => c"E_BUDGET",
        SchublciStatus::Size => c"E_SIZE",
        SchublciStatus::Range => c"E_RANGE",
        SchublciStatus::NotEssential => c"E_NOT_ESSENTIAL",
        SchublciStatus::Precondition => c"E_PRECONDITION",
        SchublciStatus::Pattern => c"E_PATTERN",
        SchublciStatus::Family => c"E_FAMILY",
        SchublciStatus::Minor => c"E_MINOR",
        SchublciStatus::Division => c"E_DIVISION",
        SchublciStatus::Degree => c"E_DEGREE",
        SchublciStatus::NullPointer => c"E_NULL",
        SchublciStatus::InvalidUtf8 => c"E_UTF8",
        SchublciStatus::VerificationFailed => c"E_VERIFY",
        SchublciStatus::Panic => c"E_PANIC",
    };
    s.as_ptr()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn schublci_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse one-line notation such as `"53241"` or `"10,2,1,3,4,5,6,7,8,9"`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schublci_perm_parse(
    text: *const c_char,
    out: *mut *mut SchublciPerm,
) -> SchublciStatus {
    guard(|| {
        let s = read_str(text)?;
        let w: Permutation = s.parse().map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(SchublciPerm(w))))
    })
}

/// # Safety
/// `perm` must come from `schublci_perm_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn schublci_perm_free(perm: *mut SchublciPerm) {
    if !perm.is_null() {
        drop(Box::from_raw(perm));
    }
}

/// Size `n` of the permutation, or 0 for a null handle.
///
/// # Safety
/// `perm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn schublci_perm_size(perm: *const SchublciPerm) -> usize {
    perm.as_ref().map_or(0, |p| p.0.n())
}

/// Coxeter length (number of inversions), or 0 for a null handle.
///
/// # Safety
/// `perm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn schublci_perm_length(perm: *const SchublciPerm) -> usize {
    perm.as_ref().map_or(0, |p| p.0.coxeter_length())
}

/// # Safety
/// `perm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schublci_inclusion_level(
    perm: *const SchublciPerm,
    out: *mut SchublciLevel,
) -> SchublciStatus {
    guard(|| {
        let level = match inclusion_level(&deref(perm)?.0) {
            InclusionLevel::Dbi => SchublciLevel::Dbi,
            InclusionLevel::AdbiOnly => SchublciLevel::AdbiOnly,
            InclusionLevel::Neither => SchublciLevel::Neither,
        };
        write_out(out, level)
    })
}

/// Classify `perm`; the report is released with `schublci_report_free`.
///
/// # Safety
/// `perm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schublci_classify(
    perm: *const SchublciPerm,
    out: *mut *mut SchublciReport,
) -> SchublciStatus {
    guard(|| {
        let report = classify(&deref(perm)?.0);
        write_out(out, Box::into_raw(Box::new(SchublciReport(report))))
    })
}

/// # Safety
/// `report` must come from `schublci_classify` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn schublci_report_free(report: *mut SchublciReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schublci_report_flags(
    report: *const SchublciReport,
    out: *mut SchublciFlags,
) -> SchublciStatus {
    guard(|| {
        let r = &deref(report)?.0;
        let flags = SchublciFlags {
            smooth: r.smooth,
            factorial: r.factorial,
            dbi: r.dbi,
            lci: r.lci,
            matrix_schubert_lci: r.matrix_schubert_lci,
        };
        write_out(out, flags)
    })
}

/// Full report, including certificates and the non-lci witness, as JSON.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schublci_report_json(
    report: *const SchublciReport,
    out: *mut *mut c_char,
) -> SchublciStatus {
    guard(|| {
        let json = serde_json::to_string(&deref(report)?.0)
            .map_err(|e| (SchublciStatus::Panic, e.to_string()))?;
        write_out(out, into_c_string(json))
    })
}

/// Number of minimal generators of the Schubert determinantal ideal.
///
/// # Safety
/// `perm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schublci_minimal_generator_count(
    perm: *const SchublciPerm,
    out: *mut usize,
) -> SchublciStatus {
    guard(|| {
        let gens = minimal_generators(&deref(perm)?.0).map_err(lib_err)?;
        write_out(out, gens.generators.len())
    })
}

/// Minimal generators as JSON, one entry per minor.
///
/// # Safety
/// `perm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schublci_minimal_generators_json(
    perm: *const SchublciPerm,
    out: *mut *mut c_char,
) -> SchublciStatus {
    guard(|| {
        let gens = minimal_generators(&deref(perm)?.0).map_err(lib_err)?;
        let json =
            serde_json::to_string(&gens).map_err(|e| (SchublciStatus::Panic, e.to_string()))?;
        write_out(out, into_c_string(json))
    })
}

/// Run a verification suite by name. The JSON report is written to `out`
/// even when the suite finds failures, in which case the status is
/// `VerificationFailed`.
///
/// # Safety
/// `suite` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schublci_verify(
    suite: *const c_char,
    max_n: usize,
    jobs: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> SchublciStatus {
    guard(|| {
        if out.is_null() {
            return fail(SchublciStatus::NullPointer, "null output pointer");
        }
        let suite: Suite = read_str(suite)?.parse().map_err(lib_err)?;
        let report = run_suite(
            suite,
            SuiteOptions {
                max_n,
                jobs: jobs.max(1),
                seed,
            },
        )
        .map_err(lib_err)?;
        let json =
            serde_json::to_string(&report).map_err(|e| (SchublciStatus::Panic, e.to_string()))?;
        write_out(out, into_c_string(json))?;
        if report.passed() {
            Ok(())
        } else {
            fail(
                SchublciStatus::VerificationFailed,
                format!("{} failures", report.failures.len()),
            )
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn schublci_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping_covers_library_codes() {
        let errors = [
            Error::Parse("x".into()),
            Error::NotLci("x".into()),
            Error::Budget("x".into()),
            Error::SizeMismatch(1, 2),
            Error::IndexOutOfRange { p: 1, q: 1, n: 0 },
            Error::NotEssential(1, 1),
            Error::Precondition("x".into()),
            Error::Pattern("x".into()),
            Error::Family("x".into()),
            Error::Minor("x".into()),
            Error::NotDivisible("x".into()),
            Error::Degree("x".into()),
        ];
        for e in errors {
            let name = unsafe { CStr::from_ptr(schublci_status_name(SchublciStatus::from(&e))) };
            assert_eq!(name.to_str().unwrap(), e.code());
        }
    }
}
