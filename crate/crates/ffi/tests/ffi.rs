use std::ffi::{c_char, CStr, CString};
use std::ptr;

use carving_ffi::*;

fn graph_from(text: &str) -> *mut CarvingGraph {
    let text = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { carving_graph_parse(text.as_ptr(), &mut g) }, CarvingStatus::Ok);
    g
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe { carving_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn vertices(sol: *const CarvingSolution) -> Vec<usize> {
    let mut len = 0;
    assert_eq!(
        unsafe { carving_solution_vertices(sol, ptr::null_mut(), 0, &mut len) },
        if len == 0 { CarvingStatus::Ok } else { CarvingStatus::BufferTooSmall }
    );
    let mut buf = vec![0; len];
    assert_eq!(unsafe { carving_solution_vertices(sol, buf.as_mut_ptr(), len, &mut len) }, CarvingStatus::Ok);
    buf
}

#[test]
fn independent_set_of_five_cycle() {
    let g = graph_from("5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n");
    assert_eq!(unsafe { carving_graph_vertex_count(g) }, 5);
    assert!(unsafe { carving_graph_is_p6_free(g) });
    let mut sol = ptr::null_mut();
    let st = unsafe { carving_solve(g, CarvingProblem::Mwis, ptr::null(), 0, 0, 0, &mut sol) };
    assert_eq!(st, CarvingStatus::Ok);
    assert_eq!(unsafe { carving_solution_weight(sol) }, 2);
    assert!(unsafe { carving_solution_family_size(sol) } > 0);
    let vs = vertices(sol);
    assert_eq!(vs.len(), 2);
    assert!((vs[0] + 1) % 5 != vs[1] && (vs[1] + 1) % 5 != vs[0]);
    unsafe {
        carving_solution_free(sol);
        carving_graph_free(g);
    }
}

#[test]
fn weighted_forest_and_complement() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { carving_graph_new(4, &mut g) }, CarvingStatus::Ok);
    for (u, v) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
        assert_eq!(unsafe { carving_graph_add_edge(g, u, v) }, CarvingStatus::Ok);
    }
    assert_eq!(unsafe { carving_graph_add_edge(g, 0, 1) }, CarvingStatus::Ok);
    assert_eq!(unsafe { carving_graph_add_edge(g, 2, 2) }, CarvingStatus::InvalidInput);
    assert_eq!(unsafe { carving_graph_add_edge(g, 0, 9) }, CarvingStatus::InvalidInput);
    let w = [5u64, 1, 5, 5];
    let mut sol = ptr::null_mut();
    let st = unsafe { carving_solve(g, CarvingProblem::Fvs, w.as_ptr(), 4, 0, 0, &mut sol) };
    assert_eq!(st, CarvingStatus::Ok);
    assert_eq!(unsafe { carving_solution_weight(sol) }, 15);
    assert_eq!(vertices(sol), vec![0, 2, 3]);
    let mut buf = [0usize; 1];
    let mut len = 0;
    assert_eq!(
        unsafe { carving_solution_complement(sol, buf.as_mut_ptr(), 1, &mut len) },
        CarvingStatus::Ok
    );
    assert_eq!((len, buf[0]), (1, 1));
    unsafe {
        carving_solution_free(sol);
        carving_graph_free(g);
    }
}

#[test]
fn errors_are_reported_as_codes() {
    let mut g = ptr::null_mut();
    let bad = CString::new("3 1\n0 7\n").unwrap();
    assert_eq!(unsafe { carving_graph_parse(bad.as_ptr(), &mut g) }, CarvingStatus::Parse);
    assert!(g.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { carving_graph_parse(ptr::null(), &mut g) }, CarvingStatus::NullPointer);
    assert_eq!(last_error(), "text is null");
    assert_eq!(unsafe { carving_graph_new(65, &mut g) }, CarvingStatus::SizeCap);

    let g = graph_from("6 5\n0 1\n1 2\n2 3\n3 4\n4 5\n");
    assert!(!unsafe { carving_graph_is_p6_free(g) });
    let mut sol = ptr::null_mut();
    let st = unsafe { carving_solve(g, CarvingProblem::Mwis, ptr::null(), 0, 0, 0, &mut sol) };
    assert_eq!(st, CarvingStatus::InvalidInput);
    assert!(sol.is_null());
    let w = [1u64; 3];
    let st = unsafe { carving_solve(g, CarvingProblem::Mwis, w.as_ptr(), 3, 0, 0, &mut sol) };
    assert_eq!(st, CarvingStatus::InvalidInput);
    assert!(last_error().contains("expected 6 weights"));
    assert_eq!(
        unsafe { carving_solve(ptr::null(), CarvingProblem::Mwis, ptr::null(), 0, 0, 0, &mut sol) },
        CarvingStatus::NullPointer
    );
    unsafe { carving_graph_free(g) };
}

#[test]
fn small_buffers_report_required_length() {
    let g = graph_from("3 0\n");
    let mut sol = ptr::null_mut();
    assert_eq!(
        unsafe { carving_solve(g, CarvingProblem::Mwis, ptr::null(), 0, 0, 0, &mut sol) },
        CarvingStatus::Ok
    );
    let mut buf = [0usize; 2];
    let mut len = 0;
    assert_eq!(
        unsafe { carving_solution_vertices(sol, buf.as_mut_ptr(), 2, &mut len) },
        CarvingStatus::BufferTooSmall
    );
    assert_eq!(len, 3);
    assert_eq!(buf, [0, 0]);
    let needed = unsafe { carving_last_error_message(ptr::null_mut(), 0) };
    assert!(needed > 0);
    let mut tiny = [1 as c_char; 4];
    assert_eq!(unsafe { carving_last_error_message(tiny.as_mut_ptr(), 4) }, needed);
    assert_eq!(tiny[3], 0);
    unsafe {
        carving_solution_free(sol);
        carving_graph_free(g);
        carving_solution_free(ptr::null_mut());
        carving_graph_free(ptr::null_mut());
    }
}

#[test]
fn status_names_are_static_strings() {
    let name = unsafe { CStr::from_ptr(carving_status_name(CarvingStatus::BufferTooSmall)) };
    assert_eq!(name.to_str().unwrap(), "buffer too small");
    assert_eq!(unsafe { CStr::from_ptr(carving_status_name(CarvingStatus::Ok)) }.to_str().unwrap(), "ok");
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/carving.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12);
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct CarvingGraph CarvingGraph;"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = std::env::var("CC").or_else(|_| which_cc().ok_or(())) else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = std::env::temp_dir().join(format!("carving-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"carving.h\"\n\
         int probe(void) {\n\
           CarvingGraph *g = 0;\n\
           CarvingSolution *s = 0;\n\
           CarvingStatus st = carving_graph_new(3, &g);\n\
           st = carving_solve(g, CARVING_PROBLEM_MWIS, 0, 0, 0, 0, &s);\n\
           size_t len = 0;\n\
           carving_solution_vertices(s, 0, 0, &len);\n\
           carving_solution_free(s);\n\
           carving_graph_free(g);\n\
           return st == CARVING_STATUS_OK ? (int)len : -1;\n\
         }\n",
    )
    .unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert!(status.success());
}

fn which_cc() -> Option<String> {
    ["cc", "gcc", "clang"].into_iter().find_map(|c| {
        std::process::Command::new(c)
            .arg("--version")
            .output()
            .ok()
            .filter(|o| o.status.success())
            .map(|_| c.to_string())
    })
}
