//! C ABI for the carving solver.
//!
//! Graphs and solutions are opaque heap handles created and released by this
//! library. Every fallible function returns a [`CarvingStatus`]; on failure
//! a description is kept per thread and can be copied out with
//! [`carving_last_error_message`]. Panics never cross the boundary: they are
//! reported as [`CarvingStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use carving::cli::solve_problem;
use carving::dp::Outcome;
use carving::error::Error;
use carving::graph::{Graph, WeightMap};
use carving::harness::Problem;
use carving::vset::VertexSet;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarvingStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments are out of range or violate a documented requirement.
    InvalidInput = 2,
    /// Text input could not be parsed.
    Parse = 3,
    /// A configured enumeration cap was exceeded.
    SizeCap = 4,
    /// The solver found no feasible solution.
    Infeasible = 5,
    /// An output buffer is too small; the required length was still written.
    BufferTooSmall = 6,
    /// An internal invariant failed.
    Internal = 7,
    /// A panic was caught at the boundary.
    Panic = 8,
}

/// Problem selector for [`carving_solve`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarvingProblem {
    /// Maximum weight independent set.
    Mwis = 0,
    /// Maximum weight induced forest; its complement is a minimum weight
    /// feedback vertex set.
    Fvs = 1,
}

/// Opaque graph handle.
pub struct CarvingGraph {
    g: Graph,
}

/// Opaque solution handle.
pub struct CarvingSolution {
    sol: VertexSet,
    weight: u64,
    n: usize,
    family_size: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> CarvingStatus {
    match e {
        Error::Parse { .. } => CarvingStatus::Parse,
        Error::InvalidInput(_) | Error::Precondition(_) => CarvingStatus::InvalidInput,
        Error::SizeCap { .. } => CarvingStatus::SizeCap,
        Error::Invariant(_) | Error::Automaton(_) => CarvingStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (CarvingStatus, String)>) -> CarvingStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CarvingStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside the carving library");
            CarvingStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (CarvingStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CarvingStatus, String) {
    (CarvingStatus::NullPointer, format!("{what} is null"))
}

/// Creates an edgeless graph on `n` vertices (at most 64).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn carving_graph_new(n: usize, out: *mut *mut CarvingGraph) -> CarvingStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = Graph::new(n).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CarvingGraph { g }));
        Ok(())
    })
}

/// Parses a graph in the text format (`n m` then `m` lines `u v`).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn carving_graph_parse(text: *const c_char, out: *mut *mut CarvingGraph) -> CarvingStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (CarvingStatus::Parse, "text is not UTF-8".to_string()))?;
        let g = Graph::parse(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CarvingGraph { g }));
        Ok(())
    })
}

/// Adds the edge `uv` (a no-op if present); loops and out-of-range
/// endpoints are rejected.
///
/// # Safety
/// `graph` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn carving_graph_add_edge(graph: *mut CarvingGraph, u: usize, v: usize) -> CarvingStatus {
    guard(|| {
        let graph = graph.as_mut().ok_or_else(|| null("graph"))?;
        graph.g.add_edge(u, v).map_err(lib_err)
    })
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn carving_graph_vertex_count(graph: *const CarvingGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.g.n())
}

/// Whether the graph has no induced path on six vertices; false for null.
///
/// # Safety
/// `graph` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn carving_graph_is_p6_free(graph: *const CarvingGraph) -> bool {
    catch_unwind(AssertUnwindSafe(|| graph.as_ref().is_some_and(|g| g.g.is_pt_free(6)))).unwrap_or(false)
}

/// Releases a graph handle; null is ignored.
///
/// # Safety
/// `graph` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn carving_graph_free(graph: *mut CarvingGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Solves `problem` on a P6-free graph. `weights` may be null for unit
/// weights; otherwise it must hold `weight_count == n` positive entries.
/// `depth == 0` selects the default depth (1 for MWIS, 3 for FVS; MWIS
/// always uses 1) and `defect == 0` makes the defect equal to the depth.
///
/// # Safety
/// `graph` must be a live handle, `weights` null or valid for
/// `weight_count` reads, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn carving_solve(
    graph: *const CarvingGraph,
    problem: CarvingProblem,
    weights: *const u64,
    weight_count: usize,
    depth: usize,
    defect: usize,
    out: *mut *mut CarvingSolution,
) -> CarvingStatus {
    guard(|| {
        let graph = graph.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = &graph.g;
        let w = if weights.is_null() {
            WeightMap::unit(g.n())
        } else {
            if weight_count != g.n() {
                return Err((
                    CarvingStatus::InvalidInput,
                    format!("expected {} weights, got {weight_count}", g.n()),
                ));
            }
            WeightMap::new(std::slice::from_raw_parts(weights, weight_count).to_vec()).map_err(lib_err)?
        };
        let problem = match problem {
            CarvingProblem::Mwis => Problem::Mwis,
            CarvingProblem::Fvs => Problem::Fvs,
        };
        let summary = solve_problem(g, &w, problem, (depth > 0).then_some(depth), (defect > 0).then_some(defect))
            .map_err(lib_err)?;
        match summary.report.outcome {
            Outcome::Optimal(s) => {
                *out = Box::into_raw(Box::new(CarvingSolution {
                    sol: s.sol,
                    weight: s.weight,
                    n: g.n(),
                    family_size: summary.family_size,
                }));
                Ok(())
            }
            Outcome::Infeasible => Err((CarvingStatus::Infeasible, "no feasible solution".into())),
        }
    })
}

/// Weight of the solution, or 0 for null.
///
/// # Safety
/// `solution` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn carving_solution_weight(solution: *const CarvingSolution) -> u64 {
    solution.as_ref().map_or(0, |s| s.weight)
}

/// Size of the carver family the solver used, or 0 for null.
///
/// # Safety
/// `solution` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn carving_solution_family_size(solution: *const CarvingSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.family_size)
}

fn copy_out(items: &[usize], buf: *mut usize, cap: usize, len: *mut usize) -> Result<(), (CarvingStatus, String)> {
    if len.is_null() {
        return Err(null("len"));
    }
    // SAFETY: checked non-null above; the caller guarantees validity.
    unsafe { *len = items.len() };
    if items.len() > cap {
        return Err((
            CarvingStatus::BufferTooSmall,
            format!("need room for {} entries, have {cap}", items.len()),
        ));
    }
    if !items.is_empty() {
        if buf.is_null() {
            return Err(null("buf"));
        }
        // SAFETY: `buf` holds at least `cap >= items.len()` entries.
        unsafe { ptr::copy_nonoverlapping(items.as_ptr(), buf, items.len()) };
    }
    Ok(())
}

/// Copies the chosen vertices (independent set or forest), ascending, into
/// `buf`. `*len` always receives the number of vertices; if `cap` is too
/// small nothing is copied and `BufferTooSmall` is returned.
///
/// # Safety
/// `solution` must be a live handle, `buf` valid for `cap` writes (or null
/// when `cap == 0`) and `len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn carving_solution_vertices(
    solution: *const CarvingSolution,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> CarvingStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        copy_out(&s.sol.to_vec(), buf, cap, len)
    })
}

/// Copies the complement of the chosen vertices (for FVS, the feedback
/// vertex set) with the same buffer protocol as
/// [`carving_solution_vertices`].
///
/// # Safety
/// Same as [`carving_solution_vertices`].
#[no_mangle]
pub unsafe extern "C" fn carving_solution_complement(
    solution: *const CarvingSolution,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> CarvingStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        copy_out(&(VertexSet::full(s.n) - s.sol).to_vec(), buf, cap, len)
    })
}

/// Releases a solution handle; null is ignored.
///
/// # Safety
/// `solution` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn carving_solution_free(solution: *mut CarvingSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to fit, into `buf`; returns the full message length in bytes
/// (excluding the terminator). Passing `cap == 0` only queries the length.
///
/// # Safety
/// `buf` must be valid for `cap` writes, or null when `cap == 0`.
#[no_mangle]
pub unsafe extern "C" fn carving_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if cap > 0 && !buf.is_null() {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn carving_status_name(status: CarvingStatus) -> *const c_char {
    let s: &'static CStr = match status {
        CarvingStatus::Ok => c"ok",
        CarvingStatus::NullPointer => c"null pointer",
        CarvingStatus::InvalidInput => c"invalid input",
        CarvingStatus::Parse => c"parse error",
        CarvingStatus::SizeCap => c"size cap exceeded",
        CarvingStatus::Infeasible => c"infeasible",
        CarvingStatus::BufferTooSmall => c"buffer too small",
        CarvingStatus::Internal => c"internal error",
        CarvingStatus::Panic => c"panic",
    };
    s.as_ptr()
}
