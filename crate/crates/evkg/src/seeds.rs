//! Pairing same-sentence eventualities into training instances and labeling
//! the unambiguous ones through seed connectives.

use crate::conllu::DependencyGraph;
use crate::eventuality::Eventuality;
use crate::relation::RelationType;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A candidate relation instance: two eventualities from one sentence plus
/// enough of the sentence context to run seed matching and the relation
/// classifier without re-reading the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingInstance {
    /// Key of the textually earlier eventuality.
    #[serde(rename = "e1")]
    pub e1_key: String,
    #[serde(rename = "e2")]
    pub e2_key: String,
    #[serde(rename = "sid")]
    pub sentence_id: String,
    /// 1-based token positions strictly between the two word spans,
    /// inclusive; empty iff `gap.0 > gap.1`.
    pub gap: (usize, usize),
    pub labels: BTreeSet<RelationType>,
    /// All sentence token forms, in order.
    #[serde(rename = "sent")]
    pub sentence: Vec<String>,
    /// Head position of each sentence token (0 = root), parallel to `sent`.
    pub heads: Vec<usize>,
    /// 1-based sentence positions of the first eventuality's words.
    pub w1: Vec<usize>,
    pub w2: Vec<usize>,
}

impl TrainingInstance {
    pub fn gap_is_empty(&self) -> bool {
        self.gap.0 > self.gap.1
    }

    /// Word forms of the first eventuality (recovered from its positions).
    pub fn e1_forms(&self) -> Vec<&str> {
        self.w1.iter().map(|&p| self.sentence[p - 1].as_str()).collect()
    }

    pub fn e2_forms(&self) -> Vec<&str> {
        self.w2.iter().map(|&p| self.sentence[p - 1].as_str()).collect()
    }
}

/// Where a connective sits relative to the two eventualities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TemplateSide {
    /// Between the eventualities, introducing the second one.
    Leading,
    /// After the second eventuality.
    Trailing,
}

/// One unambiguous connective and the relation it asserts from the first to
/// the second eventuality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedRule {
    pub connective: &'static [&'static str],
    pub relation: RelationType,
    pub side: TemplateSide,
}

const fn lead(connective: &'static [&'static str], relation: RelationType) -> SeedRule {
    SeedRule {
        connective,
        relation,
        side: TemplateSide::Leading,
    }
}

/// The built-in seed-connective inventory. Commas in the surrounding text are
/// separators, never part of the connective itself.
pub fn seed_rules() -> Vec<SeedRule> {
    use RelationType::*;
    vec![
        lead(&["before"], Precedence),
        lead(&["then"], Precedence),
        lead(&["till"], Precedence),
        lead(&["until"], Precedence),
        lead(&["after"], Succession),
        lead(&["once"], Succession),
        lead(&["meanwhile"], Synchronous),
        lead(&["meantime"], Synchronous),
        lead(&["at", "the", "same", "time"], Synchronous),
        lead(&["because"], Reason),
        lead(&["so"], Result),
        lead(&["thus"], Result),
        lead(&["therefore"], Result),
        lead(&["so", "that"], Result),
        lead(&["if"], Condition),
        lead(&["as", "long", "as"], Condition),
        lead(&["but"], Contrast),
        lead(&["however"], Contrast),
        lead(&["by", "contrast"], Contrast),
        lead(&["in", "contrast"], Contrast),
        lead(&["on", "the", "other", "hand"], Contrast),
        lead(&["on", "the", "contrary"], Contrast),
        lead(&["although"], Concession),
        lead(&["and"], Conjunction),
        lead(&["also"], Conjunction),
        lead(&["for", "example"], Instantiation),
        lead(&["for", "instance"], Instantiation),
        lead(&["in", "other", "words"], Restatement),
        lead(&["or"], Alternative),
        lead(&["unless"], Alternative),
        lead(&["as", "an", "alternative"], Alternative),
        lead(&["otherwise"], Alternative),
        SeedRule {
            connective: &["instead"],
            relation: ChosenAlternative,
            side: TemplateSide::Trailing,
        },
        lead(&["except"], Exception),
    ]
}

fn span(positions: &[usize]) -> Option<(usize, usize)> {
    Some((
        *positions.iter().min()?,
        *positions.iter().max()?,
    ))
}

/// Builds one instance per unordered eventuality pair, the earlier
/// eventuality first. Fewer than two eventualities yield nothing.
pub fn build_instances(graph: &DependencyGraph, eventualities: &[Eventuality]) -> Vec<TrainingInstance> {
    let mut ordered: Vec<&Eventuality> = eventualities.iter().collect();
    ordered.sort_by_key(|e| {
        let s = span(&e.positions().collect::<Vec<_>>()).unwrap_or((usize::MAX, usize::MAX));
        (s.0, s.1)
    });
    let sentence: Vec<String> = graph.tokens.iter().map(|t| t.form.clone()).collect();
    let heads: Vec<usize> = graph.tokens.iter().map(|t| t.head).collect();
    let mut out = Vec::new();
    for i in 0..ordered.len() {
        for j in (i + 1)..ordered.len() {
            let (e1, e2) = (ordered[i], ordered[j]);
            let w1: Vec<usize> = e1.positions().collect();
            let w2: Vec<usize> = e2.positions().collect();
            let (_, e1_end) = span(&w1).unwrap();
            let (e2_start, _) = span(&w2).unwrap();
            out.push(TrainingInstance {
                e1_key: e1.key(),
                e2_key: e2.key(),
                sentence_id: graph.sentence_id.clone(),
                gap: (e1_end + 1, e2_start.saturating_sub(1)),
                labels: BTreeSet::new(),
                sentence: sentence.clone(),
                heads: heads.clone(),
                w1,
                w2,
            });
        }
    }
    out
}

/// Every unordered same-sentence pair once, earlier eventuality first.
pub fn co_occurrence_pairs(eventualities: &[Eventuality]) -> Vec<(String, String)> {
    let mut ordered: Vec<&Eventuality> = eventualities.iter().collect();
    ordered.sort_by_key(|e| {
        let s = span(&e.positions().collect::<Vec<_>>()).unwrap_or((usize::MAX, usize::MAX));
        (s.0, s.1)
    });
    let mut out = Vec::new();
    for i in 0..ordered.len() {
        for j in (i + 1)..ordered.len() {
            out.push((ordered[i].key(), ordered[j].key()));
        }
    }
    out
}

/// Separator tokens skipped when looking for a contiguous connective.
fn is_separator(form: &str) -> bool {
    matches!(form, "," | ";")
}

/// Finds `connective` as a contiguous run in the (separator-stripped) token
/// window and returns the matched 1-based positions.
fn find_connective(
    sentence: &[String],
    window: impl Iterator<Item = usize>,
    connective: &[&str],
) -> Option<Vec<usize>> {
    let positions: Vec<usize> = window
        .filter(|&p| p >= 1 && p <= sentence.len() && !is_separator(&sentence[p - 1]))
        .collect();
    if connective.is_empty() || positions.len() < connective.len() {
        return None;
    }
    'starts: for start in 0..=(positions.len() - connective.len()) {
        for (off, want) in connective.iter().enumerate() {
            if !sentence[positions[start + off] - 1].eq_ignore_ascii_case(want) {
                continue 'starts;
            }
        }
        return Some(positions[start..start + connective.len()].to_vec());
    }
    None
}

/// Runs the seed rules against one instance. A rule fires iff its connective
/// appears contiguously in the gap (or after the second eventuality for
/// trailing rules) and at least one connective token's head lies inside
/// either eventuality's word set.
pub fn match_seed(
    instance: &TrainingInstance,
    _graph: &DependencyGraph,
    rules: &[SeedRule],
) -> BTreeSet<RelationType> {
    match_seed_standalone(instance, rules)
}

/// Same as [`match_seed`]; instances embed the sentence view they need.
pub fn match_seed_standalone(
    instance: &TrainingInstance,
    rules: &[SeedRule],
) -> BTreeSet<RelationType> {
    let anchor_set: BTreeSet<usize> = instance
        .w1
        .iter()
        .chain(instance.w2.iter())
        .copied()
        .collect();
    let sentence_len = instance.sentence.len();
    let mut fired = BTreeSet::new();
    for rule in rules {
        let window: Box<dyn Iterator<Item = usize>> = match rule.side {
            TemplateSide::Leading => {
                if instance.gap_is_empty() {
                    continue;
                }
                Box::new(instance.gap.0..=instance.gap.1)
            }
            TemplateSide::Trailing => {
                let after = instance.w2.iter().max().copied().unwrap_or(sentence_len) + 1;
                if after > sentence_len {
                    continue;
                }
                Box::new(after..=sentence_len)
            }
        };
        if let Some(matched) = find_connective(&instance.sentence, window, rule.connective) {
            let anchored = matched
                .iter()
                .any(|&p| anchor_set.contains(&instance.heads[p - 1]));
            if anchored {
                fired.insert(rule.relation);
            }
        }
    }
    fired
}
