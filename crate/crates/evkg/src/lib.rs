//! Eventuality knowledge graph toolkit.
//!
//! Builds a hybrid graph of verb-centered eventualities from dependency-parsed
//! text: pattern-based extraction, connective-seeded relation labeling with
//! bootstrap expansion, probabilistic one/two-hop retrieval, and a
//! string-match pronoun resolver on top.

pub mod bootstrap;
pub mod conllu;
pub mod eventuality;
pub mod extract;
pub mod infer;
pub mod kg;
pub mod pattern;
pub mod pipeline;
pub mod relation;
pub mod seeds;
pub mod wsc;
