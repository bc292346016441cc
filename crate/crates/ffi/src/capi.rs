//! C ABI: opaque handles, status codes, UTF-8 text in and out. Every
//! function returns a [`GsStatus`]; results come back through `out`
//! pointers. Strings returned through `*mut c_char` are NUL-terminated,
//! allocated here, and must be released with [`gs_string_free`]. A
//! per-thread message for the last failure is available through
//! [`gs_last_error_message`].
//!
//! Safety contract, shared by every function here: pointer arguments must
//! be either NULL or valid for the advertised type (NUL-terminated UTF-8
//! for `*const c_char`, live handles from this library for opaque types);
//! NULL where a value is required yields `NullPointer` rather than UB.
//! Handles are not thread-safe to mutate concurrently and must be freed
//! exactly once by their matching `gs_*_free`.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fmt::Display;

use rand::SeedableRng as _;

use graphshare::analyzer::posterior_feasibility_capped;
use graphshare::dot::graph_to_dot;
use graphshare::fileio::{
    parse_graph, parse_graph_share, parse_set_share, write_graph, write_graph_share,
    write_set_share,
};
use graphshare::graph_scheme::{
    graph_deal, graph_reconstruct, min_padding, reconstruction_cost, DealParams, GraphSecret,
    GraphShare,
};
use graphshare::password::{graph_to_password, password_to_rank, rank_to_graph, Password};
use graphshare::set_scheme::{
    set_deal, set_deal_general, set_reconstruct, SetSchemeError, SetSecret, Token, TokenRng,
};
use graphshare::shamir::shamir_cost;
use graphshare::Graph;

/// Result code of every C ABI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GsStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument failed validation.
    InvalidArgument = 3,
    /// Input text did not parse; see `gs_last_error_message`.
    ParseFailed = 4,
    /// Dealing or reconstruction failed; see `gs_last_error_message`.
    SchemeFailed = 5,
    /// Fewer shares than the threshold and `force` was not set.
    BelowThreshold = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: GsStatus, message: impl Display) -> GsStatus {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).expect("NUL stripped");
    });
    status
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn in_str<'a>(p: *const c_char) -> Result<&'a str, GsStatus> {
    if p.is_null() {
        return Err(fail(GsStatus::NullPointer, "string argument is NULL"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(GsStatus::InvalidUtf8, e))
}

unsafe fn in_ref<'a, T>(p: *const T) -> Result<&'a T, GsStatus> {
    p.as_ref()
        .ok_or_else(|| fail(GsStatus::NullPointer, "handle argument is NULL"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> GsStatus {
    if out.is_null() {
        return fail(GsStatus::NullPointer, "out pointer is NULL");
    }
    *out = Box::into_raw(Box::new(value));
    GsStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, value: String) -> GsStatus {
    if out.is_null() {
        return fail(GsStatus::NullPointer, "out pointer is NULL");
    }
    match CString::new(value) {
        Ok(s) => {
            *out = s.into_raw();
            GsStatus::Ok
        }
        Err(e) => fail(GsStatus::InvalidArgument, e),
    }
}

unsafe fn put_u64(out: *mut u64, value: u64) -> GsStatus {
    if out.is_null() {
        return fail(GsStatus::NullPointer, "out pointer is NULL");
    }
    *out = value;
    GsStatus::Ok
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Opaque handle to a labeled simple graph.
pub struct GsGraph {
    inner: Graph,
}

/// Opaque handle to a secret: alphabet names plus the graph on them.
pub struct GsGraphSecret {
    inner: GraphSecret,
}

/// Opaque handle to one share of a graph deal.
pub struct GsGraphShare {
    inner: GraphShare,
}

/// Opaque handle to the full result of one graph deal.
pub struct GsGraphShareList {
    shares: Vec<GraphShare>,
}

/// Opaque handle to a list of strings.
pub struct GsStringList {
    strings: Vec<CString>,
}

unsafe fn free_handle<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

// cbindgen does not expand macros, so the per-type release functions are
// spelled out.

/// Releases the handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_free(p: *mut GsGraph) {
    free_handle(p);
}

/// Releases the handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_secret_free(p: *mut GsGraphSecret) {
    free_handle(p);
}

/// Releases the handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_share_free(p: *mut GsGraphShare) {
    free_handle(p);
}

/// Releases the handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gs_share_list_free(p: *mut GsGraphShareList) {
    free_handle(p);
}

/// Releases the handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gs_string_list_free(p: *mut GsStringList) {
    free_handle(p);
}

/// Parses graph text (the `.g` format) into a handle.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_parse(text: *const c_char, out: *mut *mut GsGraph) -> GsStatus {
    let text = match in_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_graph(text) {
        Ok(inner) => put(out, GsGraph { inner }),
        Err(e) => fail(GsStatus::ParseFailed, e),
    }
}

/// Serializes a graph handle into `.g` text.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_to_text(
    graph: *const GsGraph,
    out: *mut *mut c_char,
) -> GsStatus {
    match in_ref(graph) {
        Ok(g) => put_string(out, write_graph(&g.inner)),
        Err(s) => s,
    }
}

/// Renders a graph handle as Graphviz DOT.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_to_dot(
    graph: *const GsGraph,
    out: *mut *mut c_char,
) -> GsStatus {
    match in_ref(graph) {
        Ok(g) => put_string(out, graph_to_dot(&g.inner)),
        Err(s) => s,
    }
}

#[no_mangle]
pub unsafe extern "C" fn gs_graph_node_count(graph: *const GsGraph, out: *mut u64) -> GsStatus {
    match in_ref(graph) {
        Ok(g) => put_u64(out, g.inner.node_count() as u64),
        Err(s) => s,
    }
}

#[no_mangle]
pub unsafe extern "C" fn gs_graph_edge_count(graph: *const GsGraph, out: *mut u64) -> GsStatus {
    match in_ref(graph) {
        Ok(g) => put_u64(out, g.inner.edge_count() as u64),
        Err(s) => s,
    }
}

/// Encodes an 8-character base-62 password as a graph on 11 nodes.
#[no_mangle]
pub unsafe extern "C" fn gs_password_encode(
    password: *const c_char,
    out: *mut *mut GsGraph,
) -> GsStatus {
    let password = match in_str(password) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match Password::new(password) {
        Ok(p) => put(
            out,
            GsGraph {
                inner: rank_to_graph(password_to_rank(&p)),
            },
        ),
        Err(e) => fail(GsStatus::InvalidArgument, e),
    }
}

/// Decodes a password graph back into its password.
#[no_mangle]
pub unsafe extern "C" fn gs_password_decode(
    graph: *const GsGraph,
    out: *mut *mut c_char,
) -> GsStatus {
    let graph = match in_ref(graph) {
        Ok(g) => g,
        Err(s) => return s,
    };
    match graph_to_password(&graph.inner) {
        Ok(p) => put_string(out, p.as_str().to_string()),
        Err(e) => fail(GsStatus::InvalidArgument, e),
    }
}

/// Smallest padding node count b with C(b+c, c) >= 2^C(c,2).
#[no_mangle]
pub unsafe extern "C" fn gs_min_padding(c: u64, out: *mut u64) -> GsStatus {
    if c == 0 {
        return fail(GsStatus::InvalidArgument, "c must be at least 1");
    }
    put_u64(out, min_padding(c as usize) as u64)
}

/// Reconstruction step count (b+c) + C(c,2) of the graph scheme.
#[no_mangle]
pub unsafe extern "C" fn gs_reconstruction_cost(c: u64, b: u64, out: *mut u64) -> GsStatus {
    if c == 0 {
        return fail(GsStatus::InvalidArgument, "c must be at least 1");
    }
    put_u64(out, reconstruction_cost(c as usize, b as usize))
}

/// bits^3, the flat cost model for a Shamir reconstruction at that width.
#[no_mangle]
pub unsafe extern "C" fn gs_shamir_cost(bits: u32, out: *mut u64) -> GsStatus {
    put_u64(out, shamir_cost(bits))
}

/// Builds a secret from comma-separated alphabet names and a graph on
/// positions 0..c-1. The graph handle is copied, not consumed.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_secret_new(
    alphabet_csv: *const c_char,
    graph: *const GsGraph,
    out: *mut *mut GsGraphSecret,
) -> GsStatus {
    let csv = match in_str(alphabet_csv) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let graph = match in_ref(graph) {
        Ok(g) => g,
        Err(s) => return s,
    };
    let alphabet: Vec<String> = csv.split(',').map(str::to_string).collect();
    match GraphSecret::new(alphabet, graph.inner.clone()) {
        Ok(inner) => put(out, GsGraphSecret { inner }),
        Err(e) => fail(GsStatus::InvalidArgument, e),
    }
}

/// Comma-separated alphabet of a secret.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_secret_alphabet(
    secret: *const GsGraphSecret,
    out: *mut *mut c_char,
) -> GsStatus {
    match in_ref(secret) {
        Ok(s) => put_string(out, s.inner.alphabet().join(",")),
        Err(s) => s,
    }
}

/// A copy of the secret's graph on positions 0..c-1.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_secret_graph(
    secret: *const GsGraphSecret,
    out: *mut *mut GsGraph,
) -> GsStatus {
    match in_ref(secret) {
        Ok(s) => put(
            out,
            GsGraph {
                inner: s.inner.graph().clone(),
            },
        ),
        Err(s) => s,
    }
}

/// Deals `n` shares with `b` padding nodes. Padding below the security
/// floor is refused unless `insecure` is set. Equal seeds give identical
/// shares.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_deal(
    secret: *const GsGraphSecret,
    n: u64,
    b: u64,
    insecure: bool,
    seed: u64,
    out: *mut *mut GsGraphShareList,
) -> GsStatus {
    let secret = match in_ref(secret) {
        Ok(s) => s,
        Err(s) => return s,
    };
    let mut params = DealParams::new(n as usize, b as usize);
    params.allow_insecure = insecure;
    let mut rng = rand_chacha_rng(seed);
    match graph_deal(&secret.inner, &params, &mut rng) {
        Ok(shares) => put(out, GsGraphShareList { shares }),
        Err(e) => fail(GsStatus::SchemeFailed, e),
    }
}

fn rand_chacha_rng(seed: u64) -> impl rand::Rng {
    rand_chacha::ChaCha12Rng::seed_from_u64(seed)
}

/// Number of shares in a deal result; 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn gs_share_list_len(list: *const GsGraphShareList) -> usize {
    list.as_ref().map_or(0, |l| l.shares.len())
}

/// An independent handle to share `index` of a deal result.
#[no_mangle]
pub unsafe extern "C" fn gs_share_list_get(
    list: *const GsGraphShareList,
    index: usize,
    out: *mut *mut GsGraphShare,
) -> GsStatus {
    let list = match in_ref(list) {
        Ok(l) => l,
        Err(s) => return s,
    };
    match list.shares.get(index) {
        Some(share) => put(
            out,
            GsGraphShare {
                inner: share.clone(),
            },
        ),
        None => fail(
            GsStatus::InvalidArgument,
            format!("share index {index} out of range 0..{}", list.shares.len()),
        ),
    }
}

/// Parses share text (the `.gshare` format) into a handle.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_share_parse(
    text: *const c_char,
    out: *mut *mut GsGraphShare,
) -> GsStatus {
    let text = match in_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_graph_share(text) {
        Ok(inner) => put(out, GsGraphShare { inner }),
        Err(e) => fail(GsStatus::ParseFailed, e),
    }
}

/// Serializes a share handle into `.gshare` text (audit data is never
/// included).
#[no_mangle]
pub unsafe extern "C" fn gs_graph_share_to_text(
    share: *const GsGraphShare,
    out: *mut *mut c_char,
) -> GsStatus {
    match in_ref(share) {
        Ok(s) => put_string(out, write_graph_share(&s.inner)),
        Err(s) => s,
    }
}

/// Recovers the secret from two distinct shares of one deal.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_reconstruct(
    share_a: *const GsGraphShare,
    share_b: *const GsGraphShare,
    out: *mut *mut GsGraphSecret,
) -> GsStatus {
    let a = match in_ref(share_a) {
        Ok(s) => s,
        Err(s) => return s,
    };
    let b = match in_ref(share_b) {
        Ok(s) => s,
        Err(s) => return s,
    };
    match graph_reconstruct(&a.inner, &b.inner) {
        Ok(inner) => put(out, GsGraphSecret { inner }),
        Err(e) => fail(GsStatus::SchemeFailed, e),
    }
}

/// How many of the 2^C(c,2) candidate secrets one share leaves feasible.
/// `feasible_out` and `candidates_out` receive the counts; equality is the
/// perfect-secrecy check.
#[no_mangle]
pub unsafe extern "C" fn gs_share_feasible_candidates(
    share: *const GsGraphShare,
    cap: u64,
    feasible_out: *mut u64,
    candidates_out: *mut u64,
) -> GsStatus {
    let share = match in_ref(share) {
        Ok(s) => s,
        Err(s) => return s,
    };
    match posterior_feasibility_capped(&share.inner, cap as usize) {
        Ok(report) => {
            let status = put_u64(feasible_out, report.feasible_count);
            if status != GsStatus::Ok {
                return status;
            }
            put_u64(candidates_out, report.candidates)
        }
        Err(e) => fail(GsStatus::SchemeFailed, e),
    }
}

/// Number of strings in a list; 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn gs_string_list_len(list: *const GsStringList) -> usize {
    list.as_ref().map_or(0, |l| l.strings.len())
}

/// Borrowed pointer to string `index`; valid while the list is alive.
#[no_mangle]
pub unsafe extern "C" fn gs_string_list_get(
    list: *const GsStringList,
    index: usize,
) -> *const c_char {
    list.as_ref()
        .and_then(|l| l.strings.get(index))
        .map_or(std::ptr::null(), |s| s.as_ptr())
}

/// Deals a (k, n) set scheme. `secret_lines` holds one token per line; the
/// result is one `.sshare` document per share.
#[no_mangle]
pub unsafe extern "C" fn gs_set_deal(
    secret_lines: *const c_char,
    k: u64,
    n: u64,
    seed: u64,
    out: *mut *mut GsStringList,
) -> GsStatus {
    let lines = match in_str(secret_lines) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let mut elements = std::collections::BTreeSet::new();
    for line in lines.lines() {
        let token = match Token::new(line.as_bytes().to_vec()) {
            Ok(t) => t,
            Err(e) => return fail(GsStatus::InvalidArgument, e),
        };
        if !elements.insert(token) {
            return fail(GsStatus::InvalidArgument, format!("duplicate token `{line}`"));
        }
    }
    let secret = match SetSecret::new(elements) {
        Ok(s) => s,
        Err(e) => return fail(GsStatus::InvalidArgument, e),
    };
    let mut rng = TokenRng::new(rand_chacha::ChaCha12Rng::seed_from_u64(seed));
    let shares = if k == 3 {
        set_deal(&secret, n as usize, &mut rng)
    } else {
        set_deal_general(&secret, k as usize, n as usize, &mut rng)
    };
    match shares {
        Ok(shares) => {
            let mut strings = Vec::with_capacity(shares.len());
            for share in &shares {
                let text = match write_set_share(share) {
                    Ok(t) => t,
                    Err(e) => return fail(GsStatus::InvalidArgument, e),
                };
                match CString::new(text) {
                    Ok(s) => strings.push(s),
                    Err(e) => return fail(GsStatus::InvalidArgument, e),
                }
            }
            put(out, GsStringList { strings })
        }
        Err(e) => fail(GsStatus::SchemeFailed, e),
    }
}

/// Intersects `.sshare` documents. Below the threshold the call fails with
/// `BelowThreshold` unless `force` is set; `below_threshold_out` reports
/// whether the result is a forced sub-threshold intersection. The result
/// holds one token per line, sorted bytewise.
#[no_mangle]
pub unsafe extern "C" fn gs_set_combine(
    share_texts: *const *const c_char,
    count: usize,
    force: bool,
    below_threshold_out: *mut bool,
    out: *mut *mut c_char,
) -> GsStatus {
    if share_texts.is_null() {
        return fail(GsStatus::NullPointer, "share_texts is NULL");
    }
    let mut shares = Vec::with_capacity(count);
    for i in 0..count {
        let text = match in_str(*share_texts.add(i)) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_set_share(text) {
            Ok(share) => shares.push(share),
            Err(e) => return fail(GsStatus::ParseFailed, format!("share {i}: {e}")),
        }
    }
    match set_reconstruct(&shares, force) {
        Ok(result) => {
            if !below_threshold_out.is_null() {
                *below_threshold_out = result.below_threshold;
            }
            let mut text = String::new();
            for token in &result.elements {
                text.push_str(&token.to_string());
                text.push('\n');
            }
            put_string(out, text)
        }
        Err(e @ SetSchemeError::BelowThreshold { .. }) => fail(GsStatus::BelowThreshold, e),
        Err(e) => fail(GsStatus::SchemeFailed, e),
    }
}
