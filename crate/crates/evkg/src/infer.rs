//! Probabilistic retrieval over the graph: conditional eventuality and
//! relation queries over one and two hops.

use crate::kg::KnowledgeGraph;
use crate::relation::RelationType;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum InferError {
    #[error("eventuality `{0}` is not in the graph")]
    UnknownEventuality(String),
    #[error("relation paths longer than two hops are not supported (got {0})")]
    PathTooLong(usize),
    #[error("empty relation path")]
    EmptyPath,
}

/// Inference options. By default co-occurrence edges take part in the
/// relation-probability denominators; excluding them keeps typed relations
/// from being swamped.
#[derive(Debug, Clone, Copy)]
pub struct InferOptions {
    pub include_co_occurrence: bool,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions {
            include_co_occurrence: true,
        }
    }
}

impl InferOptions {
    fn admits(&self, relation: RelationType) -> bool {
        self.include_co_occurrence || relation != RelationType::CoOccurrence
    }
}

/// Edge-visit counter for cost assertions on retrieval.
#[derive(Debug, Default, Clone, Copy)]
pub struct QueryStats {
    pub edges_visited: usize,
}

/// Query direction: rank tails reachable from a head, or heads reaching a
/// tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Reverse,
}

/// One ranked retrieval hit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredResult {
    pub target: String,
    #[serde(rename = "p")]
    pub probability: f64,
    /// Intermediate eventualities contributing to a two-hop hit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<String>>,
}

fn check_known(graph: &KnowledgeGraph, key: &str) -> Result<(), InferError> {
    if graph.contains(key) {
        Ok(())
    } else {
        Err(InferError::UnknownEventuality(key.to_string()))
    }
}

/// P(tail | head, relation): the relation weight normalized over all tails
/// reached from `head` via `relation`. Empty when no such edge exists.
pub fn p_tail_one(
    graph: &KnowledgeGraph,
    head: &str,
    relation: RelationType,
) -> Result<BTreeMap<String, f64>, InferError> {
    p_tail_one_counted(graph, head, relation, &mut QueryStats::default())
}

fn p_tail_one_counted(
    graph: &KnowledgeGraph,
    head: &str,
    relation: RelationType,
    stats: &mut QueryStats,
) -> Result<BTreeMap<String, f64>, InferError> {
    check_known(graph, head)?;
    let tails = graph.out_neighbors(head, relation);
    stats.edges_visited += tails.len();
    let total: f64 = tails.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return Ok(BTreeMap::new());
    }
    Ok(tails.into_iter().map(|(t, w)| (t, w / total)).collect())
}

/// P(tail | head, r1, r2): sum over intermediates of the two chained
/// one-hop probabilities.
pub fn p_tail_two(
    graph: &KnowledgeGraph,
    head: &str,
    r1: RelationType,
    r2: RelationType,
) -> Result<BTreeMap<String, f64>, InferError> {
    p_tail_two_counted(graph, head, r1, r2, &mut QueryStats::default()).map(|(m, _)| m)
}

/// Two-hop tail distribution plus, per tail, the intermediates on its paths.
pub fn p_tail_two_counted(
    graph: &KnowledgeGraph,
    head: &str,
    r1: RelationType,
    r2: RelationType,
    stats: &mut QueryStats,
) -> Result<(BTreeMap<String, f64>, BTreeMap<String, Vec<String>>), InferError> {
    check_known(graph, head)?;
    let first = p_tail_one_counted(graph, head, r1, stats)?;
    let mut probs: BTreeMap<String, f64> = BTreeMap::new();
    let mut support: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (mid, p1) in &first {
        let second = p_tail_one_counted(graph, mid, r2, stats)?;
        for (tail, p2) in second {
            *probs.entry(tail.clone()).or_insert(0.0) += p1 * p2;
            support.entry(tail).or_default().push(mid.clone());
        }
    }
    Ok((probs, support))
}

/// P(relation | head, tail): typed weight normalized over every relation on
/// that directed pair. Empty when the pair has no edge.
pub fn p_rel_one(
    graph: &KnowledgeGraph,
    head: &str,
    tail: &str,
    options: InferOptions,
) -> Result<BTreeMap<RelationType, f64>, InferError> {
    check_known(graph, head)?;
    check_known(graph, tail)?;
    let Some(weights) = graph.edge_weights(head, tail) else {
        return Ok(BTreeMap::new());
    };
    let admitted: Vec<(RelationType, f64)> = weights
        .iter()
        .filter(|(r, w)| options.admits(**r) && **w > 0.0)
        .map(|(r, w)| (*r, *w))
        .collect();
    let total: f64 = admitted.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return Ok(BTreeMap::new());
    }
    Ok(admitted.into_iter().map(|(r, w)| (r, w / total)).collect())
}

/// P(relation | head): outgoing weight of `relation` over all outgoing
/// weight. Zero when the head has no outgoing edges.
pub fn p_rel_given_head(
    graph: &KnowledgeGraph,
    head: &str,
    relation: RelationType,
    options: InferOptions,
) -> Result<f64, InferError> {
    check_known(graph, head)?;
    let mut numer = 0.0;
    let mut denom = 0.0;
    for (_, weights) in graph.out_edges(head) {
        for (r, w) in weights {
            if !options.admits(*r) {
                continue;
            }
            denom += w;
            if *r == relation {
                numer += w;
            }
        }
    }
    if denom <= 0.0 {
        return Ok(0.0);
    }
    Ok(numer / denom)
}

/// P(r1, r2 | head, tail): sum over intermediates of
/// P(r1|head) · P(mid|head,r1) · P(r2|mid,tail). Also returns the
/// contributing intermediates.
pub fn p_rel_two(
    graph: &KnowledgeGraph,
    head: &str,
    tail: &str,
    r1: RelationType,
    r2: RelationType,
    options: InferOptions,
) -> Result<(f64, Vec<String>), InferError> {
    check_known(graph, head)?;
    check_known(graph, tail)?;
    let p_r1 = p_rel_given_head(graph, head, r1, options)?;
    if p_r1 <= 0.0 {
        return Ok((0.0, Vec::new()));
    }
    let mids = p_tail_one(graph, head, r1)?;
    let mut total = 0.0;
    let mut support = Vec::new();
    for (mid, p_mid) in &mids {
        let p_r2 = p_rel_one(graph, mid, tail, options)?
            .get(&r2)
            .copied()
            .unwrap_or(0.0);
        if p_r2 > 0.0 {
            total += p_r1 * p_mid * p_r2;
            support.push(mid.clone());
        }
    }
    Ok((total, support))
}

/// Ranked eventuality retrieval along a one- or two-relation path, forward
/// (tails from a head) or reverse (heads into a tail). Ties break by key.
pub fn retrieve(
    graph: &KnowledgeGraph,
    anchor: &str,
    path: &[RelationType],
    topk: usize,
    direction: Direction,
) -> Result<Vec<ScoredResult>, InferError> {
    retrieve_counted(graph, anchor, path, topk, direction, &mut QueryStats::default())
}

pub fn retrieve_counted(
    graph: &KnowledgeGraph,
    anchor: &str,
    path: &[RelationType],
    topk: usize,
    direction: Direction,
    stats: &mut QueryStats,
) -> Result<Vec<ScoredResult>, InferError> {
    if path.is_empty() {
        return Err(InferError::EmptyPath);
    }
    if path.len() > 2 {
        return Err(InferError::PathTooLong(path.len()));
    }
    let (probs, support) = match direction {
        Direction::Forward => match path {
            [r1] => (p_tail_one_counted(graph, anchor, *r1, stats)?, BTreeMap::new()),
            [r1, r2] => p_tail_two_counted(graph, anchor, *r1, *r2, stats)?,
            _ => unreachable!(),
        },
        Direction::Reverse => {
            // Rank heads by the forward path probability of reaching the
            // anchor as tail.
            check_known(graph, anchor)?;
            let mut probs = BTreeMap::new();
            let mut support: BTreeMap<String, Vec<String>> = BTreeMap::new();
            match path {
                [r1] => {
                    let heads = graph.in_neighbors(anchor, *r1);
                    stats.edges_visited += heads.len();
                    for (head, _) in heads {
                        if let Some(p) = p_tail_one_counted(graph, &head, *r1, stats)?.get(anchor) {
                            probs.insert(head.clone(), *p);
                        }
                    }
                }
                [r1, r2] => {
                    let last = graph.in_neighbors(anchor, *r2);
                    stats.edges_visited += last.len();
                    let mut heads: std::collections::BTreeSet<String> =
                        std::collections::BTreeSet::new();
                    for (mid, _) in &last {
                        let first = graph.in_neighbors(mid, *r1);
                        stats.edges_visited += first.len();
                        heads.extend(first.into_iter().map(|(h, _)| h));
                    }
                    for head in heads {
                        let (from_head, sup) =
                            p_tail_two_counted(graph, &head, *r1, *r2, stats)?;
                        if let Some(p) = from_head.get(anchor) {
                            probs.insert(head.clone(), *p);
                            if let Some(s) = sup.get(anchor) {
                                support.insert(head.clone(), s.clone());
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
            (probs, support)
        }
    };
    let mut results: Vec<ScoredResult> = probs
        .into_iter()
        .map(|(target, probability)| {
            let s = support.get(&target).cloned();
            ScoredResult {
                target,
                probability,
                support: s,
            }
        })
        .collect();
    results.sort_by(|a, b| {
        b.probability
            .partial_cmp(&a.probability)
            .unwrap()
            .then_with(|| a.target.cmp(&b.target))
    });
    results.truncate(topk);
    Ok(results)
}
