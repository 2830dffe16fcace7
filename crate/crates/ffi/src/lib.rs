//! C ABI over `sepool`.
//!
//! Graphs and trees are opaque handles owned by the caller and released with
//! the matching `*_free` function. Every fallible call returns a
//! [`SepStatus`]; on failure a message is available from
//! [`sep_last_error_message`] on the same thread. Strings handed out by the
//! library must be released with [`sep_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sepool::graph::{load_edge_list, Graph};
use sepool::pooling::{assignments_from_tree, ClusterAssignment};
use sepool::tree::build_coding_tree;
use sepool::{structural_entropy, CodingTree, SepError};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    Domain = 5,
    Structural = 6,
    Shape = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

impl From<&SepError> for SepStatus {
    fn from(e: &SepError) -> Self {
        match e {
            SepError::Io { .. } => SepStatus::Io,
            SepError::Parse { .. } => SepStatus::Parse,
            SepError::Domain(_) => SepStatus::Domain,
            SepError::Structural(_) => SepStatus::Structural,
            SepError::Shape(_) => SepStatus::Shape,
            SepError::Json(_) => SepStatus::Parse,
        }
    }
}

/// An undirected weighted graph.
pub struct SepGraph {
    graph: Graph,
}

/// A coding tree of fixed height together with its assignment matrices.
pub struct SepTree {
    tree: CodingTree,
    assignments: Vec<ClusterAssignment>,
    entropy: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: SepStatus, msg: impl Into<String>) -> SepStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> SepStatus) -> SepStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(SepStatus::Panic, "internal panic"),
    }
}

fn from_lib(e: SepError) -> SepStatus {
    let status = SepStatus::from(&e);
    fail(status, e.to_string())
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn sep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph on `node_count` nodes from `edge_count` edges given as
/// parallel arrays. `weights` may be NULL for unit weights.
///
/// # Safety
/// `us` and `vs` (and `weights` when non-NULL) must point to `edge_count`
/// readable elements. `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sep_graph_from_edges(
    node_count: usize,
    us: *const usize,
    vs: *const usize,
    weights: *const f64,
    edge_count: usize,
    out: *mut *mut SepGraph,
) -> SepStatus {
    guard(|| {
        if out.is_null() || (edge_count > 0 && (us.is_null() || vs.is_null())) {
            return fail(SepStatus::NullPointer, "null pointer argument");
        }
        let (us, vs) = if edge_count == 0 {
            (&[][..], &[][..])
        } else {
            (
                std::slice::from_raw_parts(us, edge_count),
                std::slice::from_raw_parts(vs, edge_count),
            )
        };
        let ws = (!weights.is_null()).then(|| std::slice::from_raw_parts(weights, edge_count));
        let edges = (0..edge_count).map(|i| (us[i], vs[i], ws.map_or(1.0, |w| w[i])));
        match Graph::from_edges(node_count, edges) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(SepGraph { graph }));
                SepStatus::Ok
            }
            Err(e) => from_lib(e),
        }
    })
}

/// Reads an edge-list file. With `weighted == false` a weight column is
/// ignored.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sep_graph_load(path: *const c_char, weighted: bool, out: *mut *mut SepGraph) -> SepStatus {
    guard(|| {
        if path.is_null() || out.is_null() {
            return fail(SepStatus::NullPointer, "null pointer argument");
        }
        let Ok(path) = CStr::from_ptr(path).to_str() else {
            return fail(SepStatus::InvalidArgument, "path is not valid UTF-8");
        };
        match load_edge_list(path, weighted) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(SepGraph { graph }));
                SepStatus::Ok
            }
            Err(e) => from_lib(e),
        }
    })
}

/// # Safety
/// `graph` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sep_graph_free(graph: *mut SepGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Node count, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sep_graph_node_count(graph: *const SepGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.node_count())
}

/// Number of distinct undirected edges, or 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sep_graph_edge_count(graph: *const SepGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// Sum of weighted degrees, or NaN for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sep_graph_volume(graph: *const SepGraph) -> f64 {
    graph.as_ref().map_or(f64::NAN, |g| g.graph.total_volume())
}

/// Builds a coding tree of height `k > 1`.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sep_tree_build(graph: *const SepGraph, k: usize, out: *mut *mut SepTree) -> SepStatus {
    guard(|| {
        let (Some(g), false) = (graph.as_ref(), out.is_null()) else {
            return fail(SepStatus::NullPointer, "null pointer argument");
        };
        let built = build_coding_tree(&g.graph, k).and_then(|tree| {
            let entropy = structural_entropy(&g.graph, &tree)?.total;
            let assignments = assignments_from_tree(&tree)?;
            Ok(SepTree {
                tree,
                assignments,
                entropy,
            })
        });
        match built {
            Ok(t) => {
                *out = Box::into_raw(Box::new(t));
                SepStatus::Ok
            }
            Err(e) => from_lib(e),
        }
    })
}

/// # Safety
/// `tree` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sep_tree_free(tree: *mut SepTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Structural entropy in bits, or NaN for NULL.
///
/// # Safety
/// `tree` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sep_tree_entropy(tree: *const SepTree) -> f64 {
    tree.as_ref().map_or(f64::NAN, |t| t.entropy)
}

/// Tree height, or 0 for NULL.
///
/// # Safety
/// `tree` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sep_tree_height(tree: *const SepTree) -> usize {
    tree.as_ref().map_or(0, |t| t.tree.height())
}

/// Number of clusters at `level`: 0 is the graph itself, `k` is the root.
///
/// # Safety
/// `tree` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sep_tree_level_size(tree: *const SepTree, level: usize, out: *mut usize) -> SepStatus {
    guard(|| {
        let (Some(t), false) = (tree.as_ref(), out.is_null()) else {
            return fail(SepStatus::NullPointer, "null pointer argument");
        };
        *out = match level {
            0 => t.tree.leaf_count(),
            l if l <= t.assignments.len() => t.assignments[l - 1].rows(),
            l => {
                return fail(
                    SepStatus::InvalidArgument,
                    format!("level {l} out of range 0..={}", t.assignments.len()),
                )
            }
        };
        SepStatus::Ok
    })
}

/// Copies the cluster index of every column of `S_level` (`1 <= level <= k`)
/// into `buf`. `*len` holds the buffer capacity on entry and the number of
/// columns on return, also when the buffer is too small.
///
/// # Safety
/// `tree` must be a live handle, `len` a valid pointer, and `buf` must hold
/// `*len` writable elements (it may be NULL when `*len` is 0).
#[no_mangle]
pub unsafe extern "C" fn sep_tree_assignment(
    tree: *const SepTree,
    level: usize,
    buf: *mut usize,
    len: *mut usize,
) -> SepStatus {
    guard(|| {
        let (Some(t), false) = (tree.as_ref(), len.is_null()) else {
            return fail(SepStatus::NullPointer, "null pointer argument");
        };
        if level == 0 || level > t.assignments.len() {
            return fail(
                SepStatus::InvalidArgument,
                format!("level {level} out of range 1..={}", t.assignments.len()),
            );
        }
        let assign = t.assignments[level - 1].assignment();
        let capacity = *len;
        *len = assign.len();
        if capacity < assign.len() {
            return fail(
                SepStatus::BufferTooSmall,
                format!("need {} entries, buffer holds {capacity}", assign.len()),
            );
        }
        if buf.is_null() {
            return fail(SepStatus::NullPointer, "null buffer");
        }
        ptr::copy_nonoverlapping(assign.as_ptr(), buf, assign.len());
        SepStatus::Ok
    })
}

/// Serializes the tree as JSON. Free the result with [`sep_string_free`].
///
/// # Safety
/// `tree` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sep_tree_to_json(tree: *const SepTree, out: *mut *mut c_char) -> SepStatus {
    guard(|| {
        let (Some(t), false) = (tree.as_ref(), out.is_null()) else {
            return fail(SepStatus::NullPointer, "null pointer argument");
        };
        match t.tree.to_json() {
            Ok(json) => match CString::new(json) {
                Ok(s) => {
                    *out = s.into_raw();
                    SepStatus::Ok
                }
                Err(_) => fail(SepStatus::Panic, "JSON contained a NUL byte"),
            },
            Err(e) => from_lib(e),
        }
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
