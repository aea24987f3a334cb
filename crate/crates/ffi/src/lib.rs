//! C interface. Objects are opaque handles freed by their `*_free` function; every
//! call returns a status code, and the message of the last failure on the calling
//! thread is available from `fl_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fivelist::colorability::{FilterConfig, Verdict};
use fivelist::cycle_canvas::{enumerate_all, CycleLibrary, GenConfig};
use fivelist::store::{parse_records, Record};
use fivelist::torus::{classify, torus_filter, Classification, ObstructionSet};
use fivelist::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlStatus {
    FlOk = 0,
    FlNullArgument = 1,
    FlParseError = 2,
    FlInvalidInput = 3,
    FlIoError = 4,
    FlIncompleteLibrary = 5,
    FlBufferTooSmall = 6,
    FlOutOfRange = 7,
    FlInternal = 8,
}

/// Verdict of `fl_record_check`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlVerdict {
    FlPossiblyCritical = 0,
    FlProvablyReducible = 1,
    FlContainsObstruction = 2,
    FlIsK7 = 3,
    FlCertified5Choosable = 4,
    FlUnresolved = 5,
}

/// A parsed canvas or torus record.
pub struct FlRecord(Record);

/// Cycle-canvas candidates by circumference.
pub struct FlCycleLibrary(CycleLibrary);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: FlStatus, msg: impl Into<String>) -> FlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    status
}

fn from_error(e: Error) -> FlStatus {
    let status = match &e {
        Error::Parse { .. } => FlStatus::FlParseError,
        Error::Io { .. } | Error::CorruptJournal { .. } => FlStatus::FlIoError,
        Error::IncompleteLibrary(_) => FlStatus::FlIncompleteLibrary,
        Error::TooLarge { .. } => FlStatus::FlOutOfRange,
        _ => FlStatus::FlInvalidInput,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> FlStatus) -> FlStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(FlStatus::FlInternal, "panic inside the library"))
}

/// Copies `s` plus a terminating NUL into `buf`. `needed` (if not null) receives the
/// required size in bytes.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> FlStatus {
    if !needed.is_null() {
        *needed = s.len() + 1;
    }
    if buf.is_null() || len < s.len() + 1 {
        return fail(FlStatus::FlBufferTooSmall, format!("need {} bytes", s.len() + 1));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    FlStatus::FlOk
}

/// Message of the last failed call on this thread.
///
/// # Safety
/// `buf` must point to `len` writable bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn fl_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> FlStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    write_str(&msg, buf, len, needed)
}

/// Parses the first record of a NUL-terminated text.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fl_record_parse(text: *const c_char, out: *mut *mut FlRecord) -> FlStatus {
    if text.is_null() || out.is_null() {
        return fail(FlStatus::FlNullArgument, "null argument");
    }
    *out = ptr::null_mut();
    guard(|| {
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(FlStatus::FlParseError, "record text is not UTF-8");
        };
        match parse_records(s) {
            Ok(mut recs) => {
                *out = Box::into_raw(Box::new(FlRecord(recs.swap_remove(0))));
                FlStatus::FlOk
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `rec` must come from `fl_record_parse` and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fl_record_free(rec: *mut FlRecord) {
    if !rec.is_null() {
        drop(Box::from_raw(rec));
    }
}

/// Canonical key of a record, as hex.
///
/// # Safety
/// `rec` must be a live handle; `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn fl_record_key(
    rec: *const FlRecord,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> FlStatus {
    if rec.is_null() {
        return fail(FlStatus::FlNullArgument, "null record");
    }
    write_str(&(*rec).0.key_hex(), buf, len, needed)
}

/// Number of vertices of a record.
///
/// # Safety
/// `rec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fl_record_vertices(rec: *const FlRecord, out: *mut usize) -> FlStatus {
    if rec.is_null() || out.is_null() {
        return fail(FlStatus::FlNullArgument, "null argument");
    }
    *out = (*rec).0.n();
    FlStatus::FlOk
}

/// Criticality filter for canvases, classification for torus records.
///
/// # Safety
/// `rec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fl_record_check(rec: *const FlRecord, out: *mut FlVerdict) -> FlStatus {
    if rec.is_null() || out.is_null() {
        return fail(FlStatus::FlNullArgument, "null argument");
    }
    guard(|| {
        let cfg = FilterConfig::default();
        let v = match &(*rec).0 {
            Record::Cycle(c) => c.filter(&cfg),
            Record::Prism(p) => p.filter(&cfg),
            Record::Torus { graph, .. } => {
                *out = match classify(graph, &ObstructionSet::builtin(), &torus_filter()).0 {
                    Classification::ContainsObstruction(_) => FlVerdict::FlContainsObstruction,
                    Classification::IsK7 => FlVerdict::FlIsK7,
                    Classification::Certified5Choosable => FlVerdict::FlCertified5Choosable,
                    Classification::Unresolved => FlVerdict::FlUnresolved,
                };
                return FlStatus::FlOk;
            }
        };
        *out = match v {
            Verdict::PossiblyCritical => FlVerdict::FlPossiblyCritical,
            Verdict::ProvablyReducible(_) => FlVerdict::FlProvablyReducible,
        };
        FlStatus::FlOk
    })
}

/// Enumerates cycle-canvas candidates of circumference `3..=max_circ`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fl_cycles_enumerate(max_circ: usize, out: *mut *mut FlCycleLibrary) -> FlStatus {
    if out.is_null() {
        return fail(FlStatus::FlNullArgument, "null argument");
    }
    *out = ptr::null_mut();
    if max_circ > 16 {
        return fail(FlStatus::FlOutOfRange, "circumference above 16 is not supported");
    }
    guard(|| match enumerate_all(max_circ, &GenConfig::default()) {
        Ok(lib) => {
            *out = Box::into_raw(Box::new(FlCycleLibrary(lib)));
            FlStatus::FlOk
        }
        Err(e) => from_error(e),
    })
}

/// Number of candidates and their largest vertex count (0 when empty) for one
/// circumference.
///
/// # Safety
/// `lib` must be a live handle; `count` and `max_vertices` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fl_cycles_class(
    lib: *const FlCycleLibrary,
    circumference: usize,
    count: *mut usize,
    max_vertices: *mut usize,
) -> FlStatus {
    if lib.is_null() || count.is_null() || max_vertices.is_null() {
        return fail(FlStatus::FlNullArgument, "null argument");
    }
    let Some(class) = (*lib).0.get(&circumference) else {
        return fail(FlStatus::FlOutOfRange, format!("no circumference {circumference} in the library"));
    };
    *count = class.len();
    *max_vertices = class.iter().map(|c| c.n()).max().unwrap_or(0);
    FlStatus::FlOk
}

/// # Safety
/// `lib` must come from `fl_cycles_enumerate` and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fl_cycles_free(lib: *mut FlCycleLibrary) {
    if !lib.is_null() {
        drop(Box::from_raw(lib));
    }
}
