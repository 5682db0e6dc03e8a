//! The hybrid graph store: deduplicated eventualities with frequencies and
//! weighted typed edges between them, persisted as two JSON Lines files.

use crate::eventuality::{Eventuality, EventualityRecord};
use crate::relation::RelationType;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

pub const EVENTUALITIES_FILE: &str = "eventualities.jsonl";
pub const RELATIONS_FILE: &str = "relations.jsonl";

#[derive(Debug, thiserror::Error)]
pub enum KgError {
    #[error("eventuality `{0}` is not in the graph")]
    MissingEndpoint(String),
    #[error("relation delta must be positive, got {0}")]
    BadDelta(f64),
    #[error("{file}:{line}: {message}")]
    Corrupt {
        file: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A directed eventuality pair with one weight per relation type present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationEdge {
    pub head_key: String,
    pub tail_key: String,
    pub weights: BTreeMap<RelationType, f64>,
}

/// Serialized form of one relation edge (`relations.jsonl` schema).
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RelationRecord {
    h: String,
    t: String,
    w: BTreeMap<String, f64>,
}

/// In-memory hybrid graph. Construction is additive; queries never mutate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnowledgeGraph {
    eventualities: BTreeMap<String, Eventuality>,
    edges: BTreeMap<(String, String), BTreeMap<RelationType, f64>>,
    out_index: BTreeMap<String, BTreeSet<String>>,
    in_index: BTreeMap<String, BTreeSet<String>>,
    word_index: HashMap<String, BTreeSet<String>>,
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn eventuality_count(&self) -> usize {
        self.eventualities.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn eventuality(&self, key: &str) -> Option<&Eventuality> {
        self.eventualities.get(key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.eventualities.contains_key(key)
    }

    pub fn eventualities(&self) -> impl Iterator<Item = (&String, &Eventuality)> {
        self.eventualities.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = RelationEdge> + '_ {
        self.edges.iter().map(|((h, t), w)| RelationEdge {
            head_key: h.clone(),
            tail_key: t.clone(),
            weights: w.clone(),
        })
    }

    /// Inserts the eventuality or adds `count` to its frequency; returns the
    /// canonical key either way. Stored copies carry local word positions
    /// (1..n), since sentence offsets are meaningless in the aggregate.
    pub fn upsert_eventuality(&mut self, e: &Eventuality, count: u64) -> String {
        debug_assert!(count >= 1);
        let key = e.key();
        match self.eventualities.get_mut(&key) {
            Some(existing) => existing.frequency += count,
            None => {
                let mut stored = e.clone();
                stored.frequency = count;
                for (i, w) in stored.words.iter_mut().enumerate() {
                    w.position = i + 1;
                }
                for w in &stored.words {
                    self.word_index
                        .entry(w.form.clone())
                        .or_default()
                        .insert(key.clone());
                }
                self.eventualities.insert(key.clone(), stored);
            }
        }
        key
    }

    /// Adds `delta` to the typed weight between two existing eventualities
    /// and returns the updated weight.
    pub fn upsert_relation(
        &mut self,
        head: &str,
        tail: &str,
        relation: RelationType,
        delta: f64,
    ) -> Result<f64, KgError> {
        if delta <= 0.0 {
            return Err(KgError::BadDelta(delta));
        }
        if !self.eventualities.contains_key(head) {
            return Err(KgError::MissingEndpoint(head.to_string()));
        }
        if !self.eventualities.contains_key(tail) {
            return Err(KgError::MissingEndpoint(tail.to_string()));
        }
        let weights = self
            .edges
            .entry((head.to_string(), tail.to_string()))
            .or_default();
        let w = weights.entry(relation).or_insert(0.0);
        *w += delta;
        self.out_index
            .entry(head.to_string())
            .or_default()
            .insert(tail.to_string());
        self.in_index
            .entry(tail.to_string())
            .or_default()
            .insert(head.to_string());
        Ok(*w)
    }

    /// Exact weight lookup; absent edges and types weigh 0.
    pub fn weight(&self, head: &str, relation: RelationType, tail: &str) -> f64 {
        self.edges
            .get(&(head.to_string(), tail.to_string()))
            .and_then(|w| w.get(&relation))
            .copied()
            .unwrap_or(0.0)
    }

    /// All weights on one directed pair, if the edge exists.
    pub fn edge_weights(&self, head: &str, tail: &str) -> Option<&BTreeMap<RelationType, f64>> {
        self.edges.get(&(head.to_string(), tail.to_string()))
    }

    /// Tails reached from `head` via `relation`, heaviest first, ties by key.
    pub fn out_neighbors(&self, head: &str, relation: RelationType) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = self
            .out_index
            .get(head)
            .into_iter()
            .flatten()
            .filter_map(|t| {
                let w = self.weight(head, relation, t);
                (w > 0.0).then(|| (t.clone(), w))
            })
            .collect();
        out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// Heads reaching `tail` via `relation`, heaviest first, ties by key.
    pub fn in_neighbors(&self, tail: &str, relation: RelationType) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = self
            .in_index
            .get(tail)
            .into_iter()
            .flatten()
            .filter_map(|h| {
                let w = self.weight(h, relation, tail);
                (w > 0.0).then(|| (h.clone(), w))
            })
            .collect();
        out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// All tails adjacent to `head` with their full weight maps.
    pub fn out_edges(&self, head: &str) -> Vec<(&str, &BTreeMap<RelationType, f64>)> {
        self.out_index
            .get(head)
            .into_iter()
            .flatten()
            .filter_map(|t| {
                self.edges
                    .get(&(head.to_string(), t.clone()))
                    .map(|w| (t.as_str(), w))
            })
            .collect()
    }

    /// Pair support used by the core filter: the co-occurrence count when the
    /// edge has one, otherwise its heaviest typed weight (so hand-built
    /// graphs without co-occurrence bookkeeping survive `min_freq = 1`).
    fn pair_support(weights: &BTreeMap<RelationType, f64>) -> f64 {
        match weights.get(&RelationType::CoOccurrence) {
            Some(w) if *w > 0.0 => *w,
            _ => weights.values().copied().fold(0.0, f64::max),
        }
    }

    /// The core view: eventualities with frequency ≥ `min_freq` and edges
    /// whose pair support is ≥ `min_freq`, with dangling edges dropped.
    pub fn filter_core(&self, min_freq: u64) -> KnowledgeGraph {
        let mut out = KnowledgeGraph::new();
        for e in self.eventualities.values() {
            if e.frequency >= min_freq {
                out.upsert_eventuality(e, e.frequency);
            }
        }
        for ((h, t), weights) in &self.edges {
            if Self::pair_support(weights) < min_freq as f64 {
                continue;
            }
            if !(out.contains(h) && out.contains(t)) {
                continue;
            }
            for (r, w) in weights {
                out.upsert_relation(h, t, *r, *w).expect("endpoints checked");
            }
        }
        out
    }

    /// Eventualities whose word sequence equals `words` exactly; internal
    /// edge structure is ignored.
    pub fn match_by_words(&self, words: &[&str]) -> Vec<&Eventuality> {
        let Some(first) = words.first() else {
            return Vec::new();
        };
        self.word_index
            .get(*first)
            .into_iter()
            .flatten()
            .filter_map(|key| self.eventualities.get(key))
            .filter(|e| e.forms().eq(words.iter().copied()))
            .collect()
    }

    /// Writes `eventualities.jsonl` and `relations.jsonl` under `dir`,
    /// sorted by key for diffability.
    pub fn save(&self, dir: &Path) -> Result<(), KgError> {
        std::fs::create_dir_all(dir)?;
        let mut ef = std::io::BufWriter::new(std::fs::File::create(dir.join(EVENTUALITIES_FILE))?);
        for e in self.eventualities.values() {
            let rec = EventualityRecord::from_eventuality(e);
            serde_json::to_writer(&mut ef, &rec).map_err(std::io::Error::from)?;
            ef.write_all(b"\n")?;
        }
        ef.flush()?;
        let mut rf = std::io::BufWriter::new(std::fs::File::create(dir.join(RELATIONS_FILE))?);
        for ((h, t), weights) in &self.edges {
            let rec = RelationRecord {
                h: h.clone(),
                t: t.clone(),
                w: weights.iter().map(|(r, w)| (r.name().to_string(), *w)).collect(),
            };
            serde_json::to_writer(&mut rf, &rec).map_err(std::io::Error::from)?;
            rf.write_all(b"\n")?;
        }
        rf.flush()?;
        Ok(())
    }

    /// Loads a graph saved by [`KnowledgeGraph::save`]. Corrupt lines and
    /// dangling endpoints fail with the file and line number.
    pub fn load(dir: &Path) -> Result<KnowledgeGraph, KgError> {
        let mut g = KnowledgeGraph::new();
        let epath = dir.join(EVENTUALITIES_FILE);
        let ename = epath.display().to_string();
        let reader = BufReader::new(std::fs::File::open(&epath)?);
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: EventualityRecord =
                serde_json::from_str(&line).map_err(|e| KgError::Corrupt {
                    file: ename.clone(),
                    line: i + 1,
                    message: e.to_string(),
                })?;
            let freq = rec.freq;
            g.upsert_eventuality(&rec.into_eventuality(), freq.max(1));
        }
        let rpath = dir.join(RELATIONS_FILE);
        let rname = rpath.display().to_string();
        let reader = BufReader::new(std::fs::File::open(&rpath)?);
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: RelationRecord = serde_json::from_str(&line).map_err(|e| KgError::Corrupt {
                file: rname.clone(),
                line: i + 1,
                message: e.to_string(),
            })?;
            for (name, w) in rec.w {
                let relation: RelationType =
                    name.parse().map_err(|e: crate::relation::ParseRelationTypeError| {
                        KgError::Corrupt {
                            file: rname.clone(),
                            line: i + 1,
                            message: e.to_string(),
                        }
                    })?;
                g.upsert_relation(&rec.h, &rec.t, relation, w)
                    .map_err(|e| KgError::Corrupt {
                        file: rname.clone(),
                        line: i + 1,
                        message: e.to_string(),
                    })?;
            }
        }
        Ok(g)
    }
}
