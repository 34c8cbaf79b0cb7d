//! C ABI over `evenshell`.
//!
//! Every function returns an [`EsStatus`]; results go through out-pointers.
//! On failure, [`es_last_error`] describes the error for the calling thread.
//! Handles are created by `*_new`/`*_parse` and released by the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use evenshell::classify::{family_of, in_g_star};
use evenshell::evenposet::{even_poset, EvenPoset};
use evenshell::multigraph::{parse_graph, Multigraph};
use evenshell::shellability::{falling_report, OrderingChoice};
use evenshell::toric::{betti_general, table4};
use evenshell::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    BudgetExceeded = 5,
    BufferTooSmall = 6,
    Overflow = 7,
    Panic = 8,
}

/// Opaque multigraph handle.
pub struct EsGraph(Multigraph);

/// Opaque handle to a non-null even poset.
pub struct EsEvenPoset(EvenPoset);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn status_of(e: &Error) -> EsStatus {
    match e {
        Error::Parse { .. }
        | Error::Loop(_)
        | Error::VertexRange(_)
        | Error::DuplicateLabel(_)
        | Error::MissingLabel(..)
        | Error::LoneLabel(_)
        | Error::GroundTooLarge(_) => EsStatus::Parse,
        Error::BudgetExceeded { .. } => EsStatus::BudgetExceeded,
        _ => EsStatus::Domain,
    }
}

fn guard(f: impl FnOnce() -> Result<(), EsStatus>) -> EsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            EsStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            EsStatus::Panic
        }
    }
}

fn fail(e: Error) -> EsStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null() -> EsStatus {
    set_error("null pointer argument");
    EsStatus::NullPointer
}

unsafe fn as_str<'a>(p: *const c_char) -> Result<&'a str, EsStatus> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        EsStatus::InvalidUtf8
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, EsStatus> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), EsStatus> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

/// Copies `vals` into `buf` (capacity `cap`); `len` always receives the full length.
unsafe fn fill(vals: &[u64], buf: *mut u64, cap: usize, len: *mut usize) -> Result<(), EsStatus> {
    write(len, vals.len())?;
    if cap < vals.len() {
        set_error(format!("buffer holds {cap} values, {} needed", vals.len()));
        return Err(EsStatus::BufferTooSmall);
    }
    if !vals.is_empty() {
        if buf.is_null() {
            return Err(null());
        }
        std::ptr::copy_nonoverlapping(vals.as_ptr(), buf, vals.len());
    }
    Ok(())
}

fn to_u64(x: &num_bigint::BigUint) -> Result<u64, EsStatus> {
    u64::try_from(x).map_err(|_| {
        set_error(format!("{x} does not fit in 64 bits"));
        EsStatus::Overflow
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn es_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses graph-file text into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_graph_parse(text: *const c_char, out: *mut *mut EsGraph) -> EsStatus {
    guard(|| {
        let g = parse_graph(as_str(text)?).map_err(fail)?;
        write(out, Box::into_raw(Box::new(EsGraph(g))))
    })
}

/// # Safety
/// `g` must come from [`es_graph_parse`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn es_graph_free(g: *mut EsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_graph_vertex_count(g: *const EsGraph, out: *mut usize) -> EsStatus {
    guard(|| write(out, deref(g)?.0.n()))
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_graph_in_g_star(g: *const EsGraph, out: *mut bool) -> EsStatus {
    guard(|| write(out, in_g_star(&deref(g)?.0)))
}

/// Family name of a connected graph, e.g. `P̃_{8,2}`, as a string to release
/// with [`es_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_graph_family(g: *const EsGraph, out: *mut *mut c_char) -> EsStatus {
    guard(|| {
        let tag = family_of(&deref(g)?.0).map_err(fail)?;
        let s = CString::new(tag.to_string()).expect("family names contain no NUL");
        write(out, s.into_raw())
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn es_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Betti numbers of the real toric manifold of `g`, written to `buf`.
/// `len` receives the vector length even when `cap` is too small.
///
/// # Safety
/// `g` must be a live handle, `buf` must hold `cap` values, `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn es_graph_betti(g: *const EsGraph, buf: *mut u64, cap: usize, len: *mut usize) -> EsStatus {
    guard(|| {
        let b = betti_general(&deref(g)?.0).map_err(fail)?;
        let vals = b.as_slice().iter().map(to_u64).collect::<Result<Vec<_>, _>>()?;
        fill(&vals, buf, cap, len)
    })
}

/// Even poset of `g` with admissible collection `a` (whitespace-separated
/// tokens). A collection whose poset is null reports `Domain`.
///
/// # Safety
/// `g` must be a live handle, `a` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn es_even_poset_new(g: *const EsGraph, a: *const c_char, out: *mut *mut EsEvenPoset) -> EsStatus {
    guard(|| {
        let g = &deref(g)?.0;
        let set = g.parse_set(as_str(a)?).map_err(fail)?;
        let ep = even_poset(g, set).map_err(fail)?.into_poset().ok_or_else(|| fail(Error::Inadmissible))?;
        write(out, Box::into_raw(Box::new(EsEvenPoset(ep))))
    })
}

/// # Safety
/// `p` must come from [`es_even_poset_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn es_even_poset_free(p: *mut EsEvenPoset) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_even_poset_len(p: *const EsEvenPoset, out: *mut usize) -> EsStatus {
    guard(|| write(out, deref(p)?.0.len()))
}

/// Number of falling chains under a verified recursive atom ordering.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn es_even_poset_falling_count(p: *const EsEvenPoset, budget: u64, out: *mut usize) -> EsStatus {
    guard(|| {
        let r = falling_report(&deref(p)?.0, budget, OrderingChoice::Auto).map_err(fail)?;
        write(out, r.chains.len())
    })
}

/// The closed-form bundle-path table, row-major: 9 rows (i = 0..8) by 14
/// columns (n = 2..15).
///
/// # Safety
/// `buf` must hold `cap` values and `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn es_table4(buf: *mut u64, cap: usize, len: *mut usize) -> EsStatus {
    guard(|| {
        let rows = table4().map_err(fail)?;
        let vals = rows.iter().flatten().map(to_u64).collect::<Result<Vec<_>, _>>()?;
        fill(&vals, buf, cap, len)
    })
}
