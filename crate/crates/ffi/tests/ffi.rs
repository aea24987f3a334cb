use std::ffi::{CStr, CString};
use std::ptr;

use fivelist_ffi::*;

const WHEEL: &str = "cycle 6 10 5
boundary: 0 1 2 3 4
rot 0: 1 5 4
rot 1: 2 5 0
rot 2: 3 5 1
rot 3: 4 5 2
rot 4: 0 5 3
rot 5: 0 1 2 3 4
";

fn parse(text: &str) -> (FlStatus, *mut FlRecord) {
    let c = CString::new(text).unwrap();
    let mut rec = ptr::null_mut();
    let st = unsafe { fl_record_parse(c.as_ptr(), &mut rec) };
    (st, rec)
}

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 512];
    unsafe {
        fl_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn wheel_round_trip() {
    let (st, rec) = parse(WHEEL);
    assert_eq!(st, FlStatus::FlOk, "{}", last_error());
    let mut n = 0;
    let mut verdict = FlVerdict::FlUnresolved;
    let mut needed = 0;
    unsafe {
        assert_eq!(fl_record_vertices(rec, &mut n), FlStatus::FlOk);
        assert_eq!(fl_record_check(rec, &mut verdict), FlStatus::FlOk);
        assert_eq!(fl_record_key(rec, ptr::null_mut(), 0, &mut needed), FlStatus::FlBufferTooSmall);
        let mut buf = vec![0 as std::ffi::c_char; needed];
        assert_eq!(fl_record_key(rec, buf.as_mut_ptr(), needed, ptr::null_mut()), FlStatus::FlOk);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_bytes().len(), needed - 1);
        fl_record_free(rec);
    }
    assert_eq!(n, 6);
    assert_eq!(verdict, FlVerdict::FlPossiblyCritical);
}

#[test]
fn malformed_record() {
    let (st, rec) = parse("cycle 6 10\n");
    assert_eq!(st, FlStatus::FlParseError);
    assert!(rec.is_null());
    assert!(last_error().contains("kind n m param"));
}

#[test]
fn null_arguments() {
    let mut rec = ptr::null_mut();
    unsafe {
        assert_eq!(fl_record_parse(ptr::null(), &mut rec), FlStatus::FlNullArgument);
        assert_eq!(fl_record_vertices(ptr::null(), ptr::null_mut()), FlStatus::FlNullArgument);
        fl_record_free(ptr::null_mut());
        fl_cycles_free(ptr::null_mut());
    }
}

#[test]
fn small_cycle_classes() {
    let mut lib = ptr::null_mut();
    unsafe {
        assert_eq!(fl_cycles_enumerate(7, &mut lib), FlStatus::FlOk);
        let (mut count, mut max_v) = (0, 0);
        let mut got = Vec::new();
        for l in 3..=7 {
            assert_eq!(fl_cycles_class(lib, l, &mut count, &mut max_v), FlStatus::FlOk);
            got.push((count, max_v));
        }
        assert_eq!(got, vec![(0, 0), (0, 0), (1, 6), (4, 9), (17, 11)]);
        assert_eq!(fl_cycles_class(lib, 8, &mut count, &mut max_v), FlStatus::FlOutOfRange);
        fl_cycles_free(lib);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/fivelist.h");
    let Ok(out) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).output() else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
