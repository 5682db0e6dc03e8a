//! Eventualities: verb-centered hyperedges over words with their internal
//! dependency structure, plus the canonical key used for deduplication.

use crate::pattern::PatternCode;
use serde::{Deserialize, Serialize};

/// One word of an eventuality. `position` is the 1-based sentence position
/// at extraction time; identity and serialization ignore it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventWord {
    pub position: usize,
    pub form: String,
    pub upos: String,
}

/// Internal dependency edge with 0-based local word indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventEdge {
    pub gov: usize,
    pub dep: usize,
    pub relation: String,
}

/// A verb-centered phrase extracted by one pattern: its words in sentence
/// order, the dependency edges among them, and an aggregate frequency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eventuality {
    pub words: Vec<EventWord>,
    pub edges: Vec<EventEdge>,
    pub pattern: PatternCode,
    pub frequency: u64,
}

impl Eventuality {
    /// Word forms in positional order.
    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(|w| w.form.as_str())
    }

    /// 1-based sentence positions of the words (extraction-time view).
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().map(|w| w.position)
    }

    /// Deterministic identity string: forms joined by single spaces, a `|`
    /// separator, then `gov:rel:dep` edge entries (0-based local indices)
    /// sorted lexicographically and joined by single spaces. Equal words and
    /// edges yield equal keys regardless of edge-list order.
    pub fn key(&self) -> String {
        canonical_key(self)
    }
}

pub fn canonical_key(e: &Eventuality) -> String {
    let mut parts: Vec<String> = e
        .edges
        .iter()
        .map(|edge| format!("{}:{}:{}", edge.gov, edge.relation, edge.dep))
        .collect();
    parts.sort();
    let words: Vec<&str> = e.forms().collect();
    format!("{}|{}", words.join(" "), parts.join(" "))
}

/// JSON Lines record for an eventuality (`events.jsonl` schema).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventualityRecord {
    pub key: String,
    pub words: Vec<String>,
    pub upos: Vec<String>,
    pub edges: Vec<(usize, String, usize)>,
    pub pattern: PatternCode,
    pub freq: u64,
}

impl EventualityRecord {
    pub fn from_eventuality(e: &Eventuality) -> Self {
        EventualityRecord {
            key: e.key(),
            words: e.forms().map(str::to_string).collect(),
            upos: e.words.iter().map(|w| w.upos.clone()).collect(),
            edges: e
                .edges
                .iter()
                .map(|edge| (edge.gov, edge.relation.clone(), edge.dep))
                .collect(),
            pattern: e.pattern,
            freq: e.frequency,
        }
    }

    /// Rebuilds the in-memory form. Word positions are synthesized as the
    /// local order since the originating sentence offsets are not stored.
    pub fn into_eventuality(self) -> Eventuality {
        Eventuality {
            words: self
                .words
                .into_iter()
                .zip(self.upos)
                .enumerate()
                .map(|(i, (form, upos))| EventWord {
                    position: i + 1,
                    form,
                    upos,
                })
                .collect(),
            edges: self
                .edges
                .into_iter()
                .map(|(gov, relation, dep)| EventEdge { gov, dep, relation })
                .collect(),
            pattern: self.pattern,
            frequency: self.freq,
        }
    }
}
