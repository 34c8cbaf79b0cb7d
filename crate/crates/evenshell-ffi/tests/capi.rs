use std::ffi::{CStr, CString};
use std::ptr;

use evenshell_ffi::*;

fn parse(text: &str) -> *mut EsGraph {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { es_graph_parse(c.as_ptr(), &mut g) }, EsStatus::Ok);
    g
}

const END_BUNDLE: &str = "vertices 4\nedge 1 2 a\nedge 1 2 b\nedge 2 3\nedge 3 4\n";
const MIDDLE_BUNDLE: &str = "vertices 4\nedge 1 2\nedge 2 3 c\nedge 2 3 d\nedge 2 3 e\nedge 3 4\n";

#[test]
fn graph_queries() {
    let g = parse(END_BUNDLE);
    let mut n = 0;
    let mut member = false;
    unsafe {
        assert_eq!(es_graph_vertex_count(g, &mut n), EsStatus::Ok);
        assert_eq!(es_graph_in_g_star(g, &mut member), EsStatus::Ok);
    }
    assert_eq!(n, 4);
    assert!(member);
    let mut name = ptr::null_mut();
    assert_eq!(unsafe { es_graph_family(g, &mut name) }, EsStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(name) }.to_str().unwrap(), "P̃_{4,2}");
    unsafe {
        es_string_free(name);
        es_graph_free(g);
    }

    let h = parse(MIDDLE_BUNDLE);
    unsafe { es_graph_in_g_star(h, &mut member) };
    assert!(!member);
    let mut len = 0;
    assert_eq!(unsafe { es_graph_betti(h, ptr::null_mut(), 0, &mut len) }, EsStatus::Domain);
    unsafe { es_graph_free(h) };
}

#[test]
fn even_poset_handles() {
    let g = parse(END_BUNDLE);
    let a = CString::new("1 2 3 4 a b").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { es_even_poset_new(g, a.as_ptr(), &mut p) }, EsStatus::Ok);
    let (mut size, mut falling) = (0, 0);
    unsafe {
        assert_eq!(es_even_poset_len(p, &mut size), EsStatus::Ok);
        assert_eq!(es_even_poset_falling_count(p, 10_000_000, &mut falling), EsStatus::Ok);
    }
    assert_eq!(size, 7);
    assert_eq!(falling, 2);
    unsafe { es_even_poset_free(p) };

    let bad = CString::new("1 2").unwrap();
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { es_even_poset_new(g, bad.as_ptr(), &mut q) }, EsStatus::Domain);
    assert!(q.is_null());
    let msg = unsafe { CStr::from_ptr(es_last_error()) }.to_str().unwrap().to_string();
    assert!(!msg.is_empty());
    unsafe { es_graph_free(g) };
}

#[test]
fn budget_status() {
    let h = parse(MIDDLE_BUNDLE);
    let a = CString::new("1 2 3 4 c d").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { es_even_poset_new(h, a.as_ptr(), &mut p) }, EsStatus::Ok);
    let mut count = 0;
    assert_eq!(unsafe { es_even_poset_falling_count(p, 1, &mut count) }, EsStatus::BudgetExceeded);
    unsafe {
        es_even_poset_free(p);
        es_graph_free(h);
    }
}

#[test]
fn table_layout() {
    let mut len = 0;
    let mut buf = vec![0u64; 9 * 14];
    assert_eq!(unsafe { es_table4(buf.as_mut_ptr(), buf.len(), &mut len) }, EsStatus::Ok);
    assert_eq!(len, 126);
    assert!(buf[..14].iter().all(|&x| x == 1));
    assert_eq!(&buf[14..17], &[2, 3, 4]);
}

#[test]
fn header_declares_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/evenshell.h")).unwrap();
    for name in [
        "es_last_error",
        "es_graph_parse",
        "es_graph_free",
        "es_graph_in_g_star",
        "es_graph_betti",
        "es_even_poset_new",
        "es_even_poset_falling_count",
        "es_table4",
        "typedef struct EsGraph EsGraph",
        "EsStatus_BudgetExceeded",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}
