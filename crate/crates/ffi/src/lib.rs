//! C interface to `reebtop`.
//!
//! Objects are opaque handles released with their `_free` function. Strings
//! returned by the library are NUL-terminated, heap-allocated and released
//! with `rt_string_free`. Every fallible call returns an `RtStatus`; the
//! message of the most recent failure on the calling thread is available from
//! `rt_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use reebtop::bounds::{self, ManifoldProfile};
use reebtop::handles::HandleSequence;
use reebtop::presentation::Presentation;
use reebtop::reeb::ReebGraph;
use reebtop::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Unsupported = 5,
    Panic = 6,
}

/// Parsed group presentation.
pub struct RtPresentation(Presentation);

/// Reeb graph produced by a simulation or parsed from JSON.
pub struct RtReebGraph(ReebGraph);

/// Degree census of a Reeb graph.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RtCensus {
    pub vertices: usize,
    pub edges: usize,
    pub delta1: usize,
    pub delta2: usize,
    pub delta3: usize,
    pub cycle_rank: usize,
}

/// Summary of a degree-2 vertex estimate. `upper` is -1 when unbounded.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RtEstimate {
    pub lower: i64,
    pub upper: i64,
    pub exact: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn status_of(e: &Error) -> RtStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => RtStatus::Parse,
        Error::FreePresentation | Error::Disconnected | Error::StuckExtrema(_) => RtStatus::Unsupported,
        _ => RtStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), RtStatus>) -> RtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RtStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            RtStatus::Panic
        }
    }
}

fn fail(e: Error) -> RtStatus {
    set_error(e.to_string());
    status_of(&e)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, RtStatus> {
    if p.is_null() {
        set_error("null argument");
        return Err(RtStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        RtStatus::InvalidUtf8
    })
}

fn check_out<T>(p: *mut T) -> Result<(), RtStatus> {
    if p.is_null() {
        set_error("null output pointer");
        Err(RtStatus::NullArgument)
    } else {
        Ok(())
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    let c = CString::new(s.replace('\0', " ")).expect("no interior NUL");
    *out = c.into_raw();
}

/// Message of the last failure on this thread, or NULL. Valid until the next
/// call into the library from the same thread.
#[no_mangle]
pub extern "C" fn rt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `gens: a, b ; rels: ...`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rt_presentation_parse(src: *const c_char, out: *mut *mut RtPresentation) -> RtStatus {
    guard(|| {
        check_out(out)?;
        let s = read_str(src)?;
        let p = Presentation::parse(s).map_err(fail)?;
        *out = Box::into_raw(Box::new(RtPresentation(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from `rt_presentation_parse` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rt_presentation_free(p: *mut RtPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Generators minus relators.
///
/// # Safety
/// `p` must be a live presentation handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rt_presentation_deficiency(p: *const RtPresentation, out: *mut i64) -> RtStatus {
    guard(|| {
        check_out(out)?;
        let p = p.as_ref().ok_or_else(fail_null)?;
        *out = p.0.deficiency();
        Ok(())
    })
}

/// Ω for the given order, or the minimum over orders when `search` is set.
/// `certified` (may be NULL) reports whether a searched value is exact.
///
/// # Safety
/// `p` must be a live presentation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rt_presentation_omega(
    p: *const RtPresentation,
    search: bool,
    budget: u64,
    seed: u64,
    out: *mut usize,
    certified: *mut bool,
) -> RtStatus {
    guard(|| {
        check_out(out)?;
        let p = p.as_ref().ok_or_else(fail_null)?;
        let (omega, cert) = if search {
            let s = p.0.omega_search(budget, seed).map_err(fail)?;
            (s.omega, s.certified)
        } else {
            (p.0.omega_fixed().map_err(fail)?, true)
        };
        *out = omega;
        if !certified.is_null() {
            *certified = cert;
        }
        Ok(())
    })
}

/// Abelian invariants as text, e.g. `Z^2 + Z/3`.
///
/// # Safety
/// `p` must be a live presentation handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rt_abelianize(p: *const RtPresentation, out: *mut *mut c_char) -> RtStatus {
    guard(|| {
        check_out(out)?;
        let p = p.as_ref().ok_or_else(fail_null)?;
        write_string(out, p.0.abelianize().to_string());
        Ok(())
    })
}

fn fail_null() -> RtStatus {
    set_error("null handle");
    RtStatus::NullArgument
}

/// Runs a handle script and returns its Reeb graph.
///
/// # Safety
/// `script` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rt_simulate_script(script: *const c_char, out: *mut *mut RtReebGraph) -> RtStatus {
    guard(|| {
        check_out(out)?;
        let s = read_str(script)?;
        let seq = HandleSequence::parse(s).map_err(fail)?;
        let res = seq.run().map_err(fail)?;
        *out = Box::into_raw(Box::new(RtReebGraph(res.graph)));
        Ok(())
    })
}

/// Parses a Reeb graph from JSON.
///
/// # Safety
/// `src` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rt_reeb_from_json(src: *const c_char, out: *mut *mut RtReebGraph) -> RtStatus {
    guard(|| {
        check_out(out)?;
        let s = read_str(src)?;
        let g = ReebGraph::from_json(s).map_err(fail)?;
        *out = Box::into_raw(Box::new(RtReebGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live graph handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rt_reeb_census(g: *const RtReebGraph, out: *mut RtCensus) -> RtStatus {
    guard(|| {
        check_out(out)?;
        let g = &g.as_ref().ok_or_else(fail_null)?.0;
        let c = g.degree_census().map_err(fail)?;
        let cycle_rank = g.cycle_rank().map_err(fail)?;
        *out = RtCensus {
            vertices: g.vertex_count(),
            edges: g.edges().len(),
            delta1: c.delta(1),
            delta2: c.delta(2),
            delta3: c.delta(3),
            cycle_rank,
        };
        Ok(())
    })
}

/// # Safety
/// `g` must be a live graph handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rt_reeb_to_dot(g: *const RtReebGraph, out: *mut *mut c_char) -> RtStatus {
    guard(|| {
        check_out(out)?;
        let g = g.as_ref().ok_or_else(fail_null)?;
        write_string(out, g.0.to_dot());
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rt_reeb_free(g: *mut RtReebGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Estimate for a catalog name (`heisenberg`, `lens(5)`, ...) or a profile in
/// JSON. `report` (may be NULL) receives the full text report.
///
/// # Safety
/// `profile` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rt_bounds_estimate(
    profile: *const c_char,
    out: *mut RtEstimate,
    report: *mut *mut c_char,
) -> RtStatus {
    guard(|| {
        check_out(out)?;
        let s = read_str(profile)?;
        let p = if s.trim_start().starts_with('{') {
            ManifoldProfile::from_json(s)
        } else {
            bounds::lookup(s)
        }
        .map_err(fail)?;
        let e = bounds::estimate(&p);
        *out = RtEstimate {
            lower: e.lower,
            upper: e.upper.unwrap_or(-1),
            exact: e.exact,
        };
        if !report.is_null() {
            write_string(report, e.to_string());
        }
        Ok(())
    })
}
