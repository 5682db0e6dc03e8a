//! C ABI for loading a built eventuality knowledge graph and running
//! retrieval queries from other languages.
//!
//! Conventions: every function returns an [`EvkgStatus`]; results come back
//! through out-parameters. Strings returned by the library are owned by the
//! caller and must be released with [`evkg_string_free`]. Graph handles are
//! opaque and released with [`evkg_graph_free`]. [`evkg_last_error`] returns
//! a thread-local message for the most recent failure.

use evkg::infer::{self, Direction, InferOptions};
use evkg::kg::KnowledgeGraph;
use evkg::relation::RelationType;
use libc::c_char;
use serde_json::json;
use std::cell::RefCell;
use std::ffi::{CStr, CString};
#[cfg(test)]
use std::ptr;
use std::path::Path;

/// Opaque handle to a loaded graph.
pub struct EvkgGraph(KnowledgeGraph);

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvkgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    LoadFailed = 3,
    UnknownEventuality = 4,
    AmbiguousWords = 5,
    InvalidRelation = 6,
    InvalidQuery = 7,
    Internal = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: impl Into<String>) {
    let message = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() =
            CString::new(message).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    });
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn evkg_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, EvkgStatus> {
    if ptr.is_null() {
        set_error(format!("{what} must not be null"));
        return Err(EvkgStatus::NullArgument);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        EvkgStatus::InvalidUtf8
    })
}

fn graph_ref<'a>(handle: *const EvkgGraph) -> Result<&'a KnowledgeGraph, EvkgStatus> {
    if handle.is_null() {
        set_error("graph handle must not be null");
        return Err(EvkgStatus::NullArgument);
    }
    Ok(unsafe { &(*handle).0 })
}

fn out_string(out: *mut *mut c_char, text: String) -> EvkgStatus {
    if out.is_null() {
        set_error("output pointer must not be null");
        return EvkgStatus::NullArgument;
    }
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            EvkgStatus::Ok
        }
        Err(_) => {
            set_error("result contained an interior NUL byte");
            EvkgStatus::Internal
        }
    }
}

/// Loads a graph from a directory holding `eventualities.jsonl` and
/// `relations.jsonl`.
#[no_mangle]
pub extern "C" fn evkg_graph_load(dir: *const c_char, out: *mut *mut EvkgGraph) -> EvkgStatus {
    if out.is_null() {
        set_error("output handle must not be null");
        return EvkgStatus::NullArgument;
    }
    let dir = match read_str(dir, "directory path") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match KnowledgeGraph::load(Path::new(dir)) {
        Ok(g) => {
            unsafe { *out = Box::into_raw(Box::new(EvkgGraph(g))) };
            EvkgStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            EvkgStatus::LoadFailed
        }
    }
}

/// Releases a graph handle. Null is a no-op.
#[no_mangle]
pub extern "C" fn evkg_graph_free(graph: *mut EvkgGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Releases a string returned by this library. Null is a no-op.
#[no_mangle]
pub extern "C" fn evkg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Number of eventualities in the graph (0 for a null handle).
#[no_mangle]
pub extern "C" fn evkg_graph_eventuality_count(graph: *const EvkgGraph) -> u64 {
    graph_ref(graph).map(|g| g.eventuality_count() as u64).unwrap_or(0)
}

/// Number of directed eventuality pairs carrying at least one relation.
#[no_mangle]
pub extern "C" fn evkg_graph_edge_count(graph: *const EvkgGraph) -> u64 {
    graph_ref(graph).map(|g| g.edge_count() as u64).unwrap_or(0)
}

fn resolve_event(g: &KnowledgeGraph, raw: &str) -> Result<String, EvkgStatus> {
    if raw.contains('|') {
        if g.contains(raw) {
            return Ok(raw.to_string());
        }
        set_error(format!("unknown eventuality key `{raw}`"));
        return Err(EvkgStatus::UnknownEventuality);
    }
    let words: Vec<&str> = raw.split_whitespace().collect();
    let matches = g.match_by_words(&words);
    match matches.len() {
        0 => {
            set_error(format!("no eventuality with words `{raw}`"));
            Err(EvkgStatus::UnknownEventuality)
        }
        1 => Ok(matches[0].key()),
        _ => {
            let keys: Vec<String> = matches.iter().map(|e| e.key()).collect();
            set_error(format!("`{raw}` is ambiguous; candidate keys: {}", keys.join(", ")));
            Err(EvkgStatus::AmbiguousWords)
        }
    }
}

fn parse_relations(raw: &str) -> Result<Vec<RelationType>, EvkgStatus> {
    let parsed: Result<Vec<RelationType>, _> =
        raw.split(',').map(|s| s.trim().parse::<RelationType>()).collect();
    parsed.map_err(|e| {
        set_error(e.to_string());
        EvkgStatus::InvalidRelation
    })
}

/// Finds the keys of eventualities whose word sequence equals `words`
/// (space-separated); writes a JSON array of keys.
#[no_mangle]
pub extern "C" fn evkg_match_keys(
    graph: *const EvkgGraph,
    words: *const c_char,
    out_json: *mut *mut c_char,
) -> EvkgStatus {
    let g = match graph_ref(graph) {
        Ok(g) => g,
        Err(s) => return s,
    };
    let words = match read_str(words, "words") {
        Ok(s) => s,
        Err(s) => return s,
    };
    let split: Vec<&str> = words.split_whitespace().collect();
    let keys: Vec<String> = g.match_by_words(&split).iter().map(|e| e.key()).collect();
    out_string(out_json, json!(keys).to_string())
}

/// Ranked eventuality retrieval along a one- or two-relation path.
/// `event` is a space-separated word sequence or a full canonical key;
/// `relations` is one or two comma-separated type names. A nonzero
/// `reverse` ranks heads that reach the event instead of tails.
/// Writes the same JSON document the CLI prints.
#[no_mangle]
pub extern "C" fn evkg_query_tails(
    graph: *const EvkgGraph,
    event: *const c_char,
    relations: *const c_char,
    topk: usize,
    reverse: bool,
    out_json: *mut *mut c_char,
) -> EvkgStatus {
    let g = match graph_ref(graph) {
        Ok(g) => g,
        Err(s) => return s,
    };
    let event = match read_str(event, "event") {
        Ok(s) => s,
        Err(s) => return s,
    };
    let relations = match read_str(relations, "relations") {
        Ok(s) => s,
        Err(s) => return s,
    };
    let key = match resolve_event(g, event) {
        Ok(k) => k,
        Err(s) => return s,
    };
    let path = match parse_relations(relations) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let direction = if reverse { Direction::Reverse } else { Direction::Forward };
    let results = match infer::retrieve(g, &key, &path, topk.max(1), direction) {
        Ok(r) => r,
        Err(e) => {
            set_error(e.to_string());
            return EvkgStatus::InvalidQuery;
        }
    };
    let rendered: Vec<serde_json::Value> = results
        .iter()
        .map(|r| {
            let words = g
                .eventuality(&r.target)
                .map(|e| e.forms().collect::<Vec<_>>().join(" "))
                .unwrap_or_default();
            let mut v = json!({"target": r.target, "words": words, "p": r.probability});
            if let Some(s) = &r.support {
                v["support"] = json!(s);
            }
            v
        })
        .collect();
    let doc = json!({
        "query": {
            "event": key,
            "relations": path.iter().map(|r| r.name()).collect::<Vec<_>>(),
            "direction": if reverse { "reverse" } else { "forward" },
            "topk": topk.max(1),
        },
        "results": rendered,
    });
    out_string(out_json, doc.to_string())
}

/// Relation probabilities between two eventualities. With a null
/// `relations`, writes the full one-hop distribution; with one name, that
/// relation's probability; with two, the two-hop path probability and its
/// supporting intermediates.
#[no_mangle]
pub extern "C" fn evkg_query_relations(
    graph: *const EvkgGraph,
    head: *const c_char,
    tail: *const c_char,
    relations: *const c_char,
    include_co_occurrence: bool,
    out_json: *mut *mut c_char,
) -> EvkgStatus {
    let g = match graph_ref(graph) {
        Ok(g) => g,
        Err(s) => return s,
    };
    let head = match read_str(head, "head event") {
        Ok(s) => s,
        Err(s) => return s,
    };
    let tail = match read_str(tail, "tail event") {
        Ok(s) => s,
        Err(s) => return s,
    };
    let head_key = match resolve_event(g, head) {
        Ok(k) => k,
        Err(s) => return s,
    };
    let tail_key = match resolve_event(g, tail) {
        Ok(k) => k,
        Err(s) => return s,
    };
    let options = InferOptions { include_co_occurrence };
    let path = if relations.is_null() {
        None
    } else {
        match read_str(relations, "relations").and_then(|raw| parse_relations(raw)) {
            Ok(p) => Some(p),
            Err(s) => return s,
        }
    };
    let results = match path.as_deref() {
        None => match infer::p_rel_one(g, &head_key, &tail_key, options) {
            Ok(p) => json!(p
                .iter()
                .map(|(r, v)| (r.name().to_string(), *v))
                .collect::<std::collections::BTreeMap<_, _>>()),
            Err(e) => {
                set_error(e.to_string());
                return EvkgStatus::InvalidQuery;
            }
        },
        Some([r]) => match infer::p_rel_one(g, &head_key, &tail_key, options) {
            Ok(p) => json!({ r.name(): p.get(r).copied().unwrap_or(0.0) }),
            Err(e) => {
                set_error(e.to_string());
                return EvkgStatus::InvalidQuery;
            }
        },
        Some([r1, r2]) => {
            match infer::p_rel_two(g, &head_key, &tail_key, *r1, *r2, options) {
                Ok((p, support)) => {
                    json!({"path": [r1.name(), r2.name()], "p": p, "support": support})
                }
                Err(e) => {
                    set_error(e.to_string());
                    return EvkgStatus::InvalidQuery;
                }
            }
        }
        Some(other) => {
            set_error(format!("expected one or two relations, got {}", other.len()));
            return EvkgStatus::InvalidQuery;
        }
    };
    let doc = json!({"query": {"head": head_key, "tail": tail_key}, "results": results});
    out_string(out_json, doc.to_string())
}
