//! C ABI over `kscore`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_from_*`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`KsStatus`]; on failure the message is available from
//! [`ks_last_error_message`] on the same thread. Strings returned through
//! `char **` out-parameters are owned by the caller and must be released with
//! [`ks_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kscore::graphs::{self, io as graph_io, Graph};
use kscore::ks::{self, OperatorSet};
use kscore::linalg::TolerancePolicy;
use kscore::{channels, theta, Error};
use serde_json::json;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Ambiguity = 4,
    NotProjector = 5,
    Budget = 6,
    Precondition = 7,
    Integrity = 8,
    Convergence = 9,
    Parse = 10,
    Io = 11,
    Panic = 12,
}

impl From<&Error> for KsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension(_) => KsStatus::Dimension,
            Error::Ambiguity { .. } => KsStatus::Ambiguity,
            Error::NotProjector(_) | Error::NotHermitian(_) => KsStatus::NotProjector,
            Error::Invalid(_) => KsStatus::InvalidArgument,
            Error::Budget { .. } => KsStatus::Budget,
            Error::Precondition(_) => KsStatus::Precondition,
            Error::Integrity(_) => KsStatus::Integrity,
            Error::Convergence { .. } => KsStatus::Convergence,
            Error::Parse(_) | Error::Json(_) => KsStatus::Parse,
            Error::Io(_) => KsStatus::Io,
        }
    }
}

/// Built-in operator sets.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsFixture {
    Cabello18 = 0,
    Peres24 = 1,
}

/// Opaque operator set.
pub struct KsOperatorSet(OperatorSet);

/// Opaque graph.
pub struct KsGraph(Graph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: KsStatus, msg: impl Into<String>) -> KsStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), KsStatus>) -> KsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(KsStatus::Panic, "internal panic"),
    }
}

fn lift_err(e: Error) -> KsStatus {
    let s = KsStatus::from(&e);
    fail(s, e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, KsStatus> {
    if p.is_null() {
        return Err(fail(KsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(KsStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, KsStatus> {
    p.as_ref().ok_or_else(|| fail(KsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, KsStatus> {
    p.as_mut().ok_or_else(|| fail(KsStatus::NullPointer, format!("{what} is null")))
}

fn tolerance(zero_tol: f64, ambiguity_factor: f64) -> Result<TolerancePolicy, KsStatus> {
    TolerancePolicy::new(zero_tol, ambiguity_factor).map_err(lift_err)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior nul").into_raw()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ks_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ks_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ks_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an operator-set JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_operator_set_from_json(
    json: *const c_char,
    zero_tol: f64,
    ambiguity_factor: f64,
    out: *mut *mut KsOperatorSet,
) -> KsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let text = str_arg(json, "json")?;
        let tol = tolerance(zero_tol, ambiguity_factor)?;
        let set = OperatorSet::from_json_str(text, tol).map_err(lift_err)?;
        *out = Box::into_raw(Box::new(KsOperatorSet(set)));
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_operator_set_fixture(which: KsFixture, out: *mut *mut KsOperatorSet) -> KsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let set = match which {
            KsFixture::Cabello18 => ks::fixture_cabello18(),
            KsFixture::Peres24 => ks::fixture_peres24(),
        };
        *out = Box::into_raw(Box::new(KsOperatorSet(set)));
        Ok(())
    })
}

/// # Safety
/// `set` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ks_operator_set_free(set: *mut KsOperatorSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of elements, or 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ks_operator_set_len(set: *const KsOperatorSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// Hilbert space dimension, or 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ks_operator_set_dim(set: *const KsOperatorSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.dim())
}

/// Serialises the set back to JSON.
///
/// # Safety
/// `set` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_operator_set_to_json(set: *const KsOperatorSet, out_json: *mut *mut c_char) -> KsStatus {
    guard(|| {
        let set = ref_arg(set, "set")?;
        let out = out_arg(out_json, "out_json")?;
        *out = into_c_string(set.0.to_json().map_err(lift_err)?);
        Ok(())
    })
}

/// Classifies the set. `is_ks` receives 1 for a KS verdict and 0
/// otherwise; `verdict_json`, if not NULL, receives the full verdict.
///
/// # Safety
/// `set` must be a live handle; `is_ks` must be writable; `verdict_json`
/// must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ks_classify(
    set: *const KsOperatorSet,
    is_ks: *mut i32,
    verdict_json: *mut *mut c_char,
) -> KsStatus {
    guard(|| {
        let set = ref_arg(set, "set")?;
        let is_ks = out_arg(is_ks, "is_ks")?;
        let verdict = ks::classify(&set.0).map_err(lift_err)?;
        *is_ks = i32::from(verdict.classification.is_ks());
        if let Some(out) = verdict_json.as_mut() {
            *out = into_c_string(serde_json::to_string(&verdict).map_err(|e| lift_err(e.into()))?);
        }
        Ok(())
    })
}

/// Parses a graph in edge-list or DIMACS format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_graph_from_text(text: *const c_char, out: *mut *mut KsGraph) -> KsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let g = graph_io::parse_graph(str_arg(text, "text")?).map_err(lift_err)?;
        *out = Box::into_raw(Box::new(KsGraph(g)));
        Ok(())
    })
}

/// Orthogonality graph of the measurement multiset of `set`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_graph_orthogonality(set: *const KsOperatorSet, out: *mut *mut KsGraph) -> KsStatus {
    guard(|| {
        let set = ref_arg(set, "set")?;
        let out = out_arg(out, "out")?;
        let cover = ks::enumerate_measurements(&set.0).map_err(lift_err)?;
        let g = graphs::orthogonality_graph(&set.0, &cover).map_err(lift_err)?;
        *out = Box::into_raw(Box::new(KsGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_graph_hadamard(n: usize, out: *mut *mut KsGraph) -> KsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let g = graphs::hadamard_graph(n).map_err(lift_err)?;
        *out = Box::into_raw(Box::new(KsGraph(g)));
        Ok(())
    })
}

/// Cartesian (`strong == 0`) or strong product.
///
/// # Safety
/// `g` and `h` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_graph_product(
    g: *const KsGraph,
    h: *const KsGraph,
    strong: i32,
    out: *mut *mut KsGraph,
) -> KsStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let h = ref_arg(h, "h")?;
        let out = out_arg(out, "out")?;
        let p = if strong != 0 {
            graphs::strong_product(&g.0, &h.0)
        } else {
            graphs::cartesian_product(&g.0, &h.0)
        };
        *out = Box::into_raw(Box::new(KsGraph(p)));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_graph_complement(g: *const KsGraph, out: *mut *mut KsGraph) -> KsStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(KsGraph(graphs::complement(&g.0))));
        Ok(())
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ks_graph_free(g: *mut KsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ks_graph_vertices(g: *const KsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n_vertices())
}

/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ks_graph_edges(g: *const KsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n_edges())
}

/// Serialises the graph in edge-list format.
///
/// # Safety
/// `g` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_graph_to_text(g: *const KsGraph, out_text: *mut *mut c_char) -> KsStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let out = out_arg(out_text, "out_text")?;
        *out = into_c_string(graph_io::write_graph(&g.0));
        Ok(())
    })
}

/// Exact independence number; `max_vertices == 0` selects the default
/// budget.
///
/// # Safety
/// `g` must be a live handle; `alpha` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_independence_number(g: *const KsGraph, max_vertices: usize, alpha: *mut usize) -> KsStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let alpha = out_arg(alpha, "alpha")?;
        let budget = if max_vertices == 0 { graphs::DEFAULT_MIS_BUDGET } else { max_vertices };
        *alpha = graphs::independence_number_with_budget(&g.0, budget).map_err(lift_err)?.alpha;
        Ok(())
    })
}

/// Exact chromatic number; `max_vertices == 0` selects the default budget.
///
/// # Safety
/// `g` must be a live handle; `chi` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_chromatic_number(g: *const KsGraph, max_vertices: usize, chi: *mut usize) -> KsStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let chi = out_arg(chi, "chi")?;
        let budget = if max_vertices == 0 { graphs::DEFAULT_CHROMATIC_BUDGET } else { max_vertices };
        *chi = graphs::chromatic_number_with_budget(&g.0, budget).map_err(lift_err)?.chi;
        Ok(())
    })
}

/// Lovász theta bracketed by certified bounds `lower <= theta <= upper`.
///
/// # Safety
/// `g` must be a live handle; `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_lovasz_theta(g: *const KsGraph, eps: f64, lower: *mut f64, upper: *mut f64) -> KsStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let lower = out_arg(lower, "lower")?;
        let upper = out_arg(upper, "upper")?;
        let t = theta::lovasz_theta(&g.0, eps).map_err(lift_err)?;
        *lower = t.value;
        *upper = t.dual_bound;
        Ok(())
    })
}

/// Builds the separation instance of a projective KS set and writes a JSON
/// report with `c0`, the number of messages `k`, the strategy check and an
/// independent set witness. `separated` receives 1 when `c0 < k` and the
/// strategy verifies.
///
/// # Safety
/// `set` must be a live handle; `separated` and `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ks_certify_separation(
    set: *const KsOperatorSet,
    separated: *mut i32,
    out_json: *mut *mut c_char,
) -> KsStatus {
    guard(|| {
        let set = ref_arg(set, "set")?;
        let separated = out_arg(separated, "separated")?;
        let out = out_arg(out_json, "out_json")?;
        let tol = *set.0.tolerance();
        let c = channels::strategy_from_ks(&set.0).map_err(lift_err)?;
        let report = channels::verify_ea_strategy(&c.channel, &c.strategy, &tol).map_err(lift_err)?;
        let alpha = channels::c0(&c.channel).map_err(lift_err)?;
        let k = c.strategy.n_messages();
        let ok = report.is_valid() && alpha.alpha < k;
        *separated = i32::from(ok);
        let doc = json!({
            "c0": alpha.alpha,
            "k": k,
            "vertices": c.graph.n_vertices(),
            "strategy_valid": report.is_valid(),
            "separated": ok,
            "independent_set": alpha.witness,
            "tolerance": tol,
        });
        *out = into_c_string(doc.to_string());
        Ok(())
    })
}
