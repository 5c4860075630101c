use std::ffi::{CStr, CString};
use std::ptr;

use reebtop_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    rt_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = rt_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn presentation_roundtrip() {
    unsafe {
        let src = cstr("gens: a, b ; rels: [a,[a,b]], [b,[a,b]]");
        let mut p = ptr::null_mut();
        assert_eq!(rt_presentation_parse(src.as_ptr(), &mut p), RtStatus::Ok);
        assert!(rt_last_error_message().is_null());

        let mut d = 0i64;
        assert_eq!(rt_presentation_deficiency(p, &mut d), RtStatus::Ok);
        assert_eq!(d, 0);

        let mut om = 0usize;
        let mut cert = false;
        assert_eq!(rt_presentation_omega(p, true, 1000, 7, &mut om, &mut cert), RtStatus::Ok);
        assert_eq!((om, cert), (2, true));
        assert_eq!(rt_presentation_omega(p, false, 0, 0, &mut om, ptr::null_mut()), RtStatus::Ok);
        assert_eq!(om, 2);

        let mut s = ptr::null_mut();
        assert_eq!(rt_abelianize(p, &mut s), RtStatus::Ok);
        let ab = take_string(s);
        assert!(ab.contains("Z^2"), "{ab}");
        rt_presentation_free(p);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut p = ptr::null_mut();
        let bad = cstr("gens: a ; rels: a b");
        assert_eq!(rt_presentation_parse(bad.as_ptr(), &mut p), RtStatus::InvalidInput);
        assert!(p.is_null());
        assert!(last_error().contains('b'));

        assert_eq!(rt_presentation_parse(ptr::null(), &mut p), RtStatus::NullArgument);
        let mut d = 0i64;
        assert_eq!(rt_presentation_deficiency(ptr::null(), &mut d), RtStatus::NullArgument);

        let free = cstr("gens: a, b ; rels:");
        assert_eq!(rt_presentation_parse(free.as_ptr(), &mut p), RtStatus::Ok);
        let mut om = 0usize;
        assert_eq!(rt_presentation_omega(p, false, 0, 0, &mut om, ptr::null_mut()), RtStatus::Unsupported);
        rt_presentation_free(p);

        let bad_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(rt_presentation_parse(bad_utf8.as_ptr().cast(), &mut p), RtStatus::InvalidUtf8);

        let mut e = RtEstimate::default();
        let name = cstr("no-such-manifold");
        assert_eq!(rt_bounds_estimate(name.as_ptr(), &mut e, ptr::null_mut()), RtStatus::InvalidInput);

        rt_presentation_free(ptr::null_mut());
        rt_reeb_free(ptr::null_mut());
        rt_string_free(ptr::null_mut());
    }
}

#[test]
fn simulate_and_inspect() {
    unsafe {
        let script = cstr("h0\nh2 split @c1 (0,0)\nh1 merge @c1 @c2\nh3 @c1\n");
        let mut g = ptr::null_mut();
        let st = rt_simulate_script(script.as_ptr(), &mut g);
        assert_eq!(st, RtStatus::Ok, "{}", if st == RtStatus::Ok { String::new() } else { last_error() });
        let mut c = RtCensus::default();
        assert_eq!(rt_reeb_census(g, &mut c), RtStatus::Ok);
        assert_eq!(c.cycle_rank, 1);
        assert_eq!(c.delta2, 0);
        assert_eq!(c.delta1, 2);
        let mut s = ptr::null_mut();
        assert_eq!(rt_reeb_to_dot(g, &mut s), RtStatus::Ok);
        assert!(take_string(s).starts_with("digraph reeb"));
        rt_reeb_free(g);

        let bad = cstr("h3 @c1\n");
        assert_ne!(rt_simulate_script(bad.as_ptr(), &mut g), RtStatus::Ok);
        assert!(last_error().contains("event 1"));
    }
}

#[test]
fn graph_from_json() {
    unsafe {
        let src = cstr(r#"{"dim":2,"vertices":[{"index":0},{"index":1},{"index":2}],"edges":[[0,1],[1,2]]}"#);
        let mut g = ptr::null_mut();
        assert_eq!(rt_reeb_from_json(src.as_ptr(), &mut g), RtStatus::Ok);
        let mut c = RtCensus::default();
        assert_eq!(rt_reeb_census(g, &mut c), RtStatus::Ok);
        assert_eq!((c.vertices, c.edges, c.delta2, c.cycle_rank), (3, 2, 1, 0));
        rt_reeb_free(g);

        let junk = cstr("{");
        assert_eq!(rt_reeb_from_json(junk.as_ptr(), &mut g), RtStatus::Parse);
    }
}

#[test]
fn bounds_estimates() {
    unsafe {
        let name = cstr("heisenberg");
        let mut e = RtEstimate::default();
        let mut report = ptr::null_mut();
        assert_eq!(rt_bounds_estimate(name.as_ptr(), &mut e, &mut report), RtStatus::Ok);
        assert_eq!(e, RtEstimate { lower: 4, upper: 4, exact: true });
        assert!(take_string(report).contains("exact"));

        let json = cstr(r#"{"name":"mystery","dim":3,"orientable":true,"euler_char":0}"#);
        assert_eq!(rt_bounds_estimate(json.as_ptr(), &mut e, ptr::null_mut()), RtStatus::Ok);
        assert!(!e.exact);
        assert_eq!(e.upper, -1);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/reebtop.h")).unwrap();
    for f in [
        "rt_presentation_parse",
        "rt_presentation_free",
        "rt_presentation_deficiency",
        "rt_presentation_omega",
        "rt_abelianize",
        "rt_string_free",
        "rt_simulate_script",
        "rt_reeb_from_json",
        "rt_reeb_census",
        "rt_reeb_to_dot",
        "rt_reeb_free",
        "rt_bounds_estimate",
        "rt_last_error_message",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}
