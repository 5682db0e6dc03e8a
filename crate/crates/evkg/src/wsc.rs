//! Winograd-style pronoun resolution by placeholder substitution and
//! one-hop edge-support counting over the graph.

use crate::conllu::{DependencyGraph, Token};
use crate::extract::extract_eventualities;
use crate::eventuality::Eventuality;
use crate::kg::KnowledgeGraph;
use crate::relation::RelationType;
use crate::seeds::{build_instances, match_seed_standalone, seed_rules};
use serde::{Deserialize, Serialize};
use std::io::BufRead;

#[derive(Debug, thiserror::Error)]
pub enum WscError {
    #[error("line {line}: {message}")]
    BadQuestion { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which candidate a prediction points at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Candidate {
    N1,
    N2,
}

impl Candidate {
    fn flipped(self) -> Candidate {
        match self {
            Candidate::N1 => Candidate::N2,
            Candidate::N2 => Candidate::N1,
        }
    }
}

/// One pronoun question: a parsed sentence (both clauses in one graph), two
/// candidate token positions, the pronoun position, and an optional gold
/// answer.
#[derive(Debug, Clone)]
pub struct WscQuestion {
    pub id: String,
    pub graph: DependencyGraph,
    pub n1: usize,
    pub n2: usize,
    pub pronoun: usize,
    pub answer: Option<Candidate>,
}

/// An eventuality with one word replaced by a placeholder marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoEventuality {
    /// Word forms with the placeholder marker substituted in.
    pub forms: Vec<String>,
    /// Local index of the placeholder position.
    pub placeholder: usize,
    pub marker: char,
}

impl PseudoEventuality {
    fn from_eventuality(e: &Eventuality, position: usize, marker: char) -> Option<Self> {
        let placeholder = e.positions().position(|p| p == position)?;
        let forms = e
            .forms()
            .enumerate()
            .map(|(i, f)| {
                if i == placeholder {
                    marker.to_string()
                } else {
                    f.to_string()
                }
            })
            .collect();
        Some(PseudoEventuality {
            forms,
            placeholder,
            marker,
        })
    }

    /// True iff the stored word sequence equals this one everywhere except
    /// the placeholder position.
    fn matches(&self, stored: &Eventuality) -> bool {
        if stored.words.len() != self.forms.len() {
            return false;
        }
        stored
            .forms()
            .enumerate()
            .all(|(i, f)| i == self.placeholder || f == self.forms[i])
    }

    /// The stored word sitting at the placeholder position.
    fn placeholder_word<'a>(&self, stored: &'a Eventuality) -> &'a str {
        stored.words[self.placeholder].form.as_str()
    }
}

/// Placeholdered eventualities for one question plus the relation type the
/// support counting runs over.
#[derive(Debug, Clone)]
pub struct PreparedQuestion {
    pub e_n1: Option<PseudoEventuality>,
    pub e_n2: Option<PseudoEventuality>,
    pub e_p: Option<PseudoEventuality>,
    pub relation: RelationType,
}

/// Extracts the candidate- and pronoun-bearing eventualities, substitutes
/// the X/Y/P placeholders, and picks the relation type: a seed-connective
/// type when one links the eventualities, co-occurrence otherwise. Missing
/// eventualities are left as `None`; their support score is forced to 0.
pub fn prepare(question: &WscQuestion) -> PreparedQuestion {
    let eventualities = extract_eventualities(&question.graph);
    let containing = |position: usize| {
        eventualities
            .iter()
            .find(|e| e.positions().any(|p| p == position))
    };
    let source_n1 = containing(question.n1);
    let source_n2 = containing(question.n2);
    let source_p = containing(question.pronoun);

    let e_n1 = source_n1.and_then(|e| PseudoEventuality::from_eventuality(e, question.n1, 'X'));
    let e_n2 = source_n2.and_then(|e| PseudoEventuality::from_eventuality(e, question.n2, 'Y'));
    let e_p = source_p.and_then(|e| PseudoEventuality::from_eventuality(e, question.pronoun, 'P'));

    // Relation type: first seed connective found between a candidate
    // eventuality and the pronoun eventuality.
    let mut relation = RelationType::CoOccurrence;
    if let Some(ep) = source_p {
        let rules = seed_rules();
        'outer: for en in [source_n1, source_n2].into_iter().flatten() {
            if en.key() == ep.key() {
                continue;
            }
            let pair = [en.clone(), ep.clone()];
            for inst in build_instances(&question.graph, &pair) {
                if let Some(t) = match_seed_standalone(&inst, &rules).into_iter().next() {
                    relation = t;
                    break 'outer;
                }
            }
        }
    }
    PreparedQuestion {
        e_n1,
        e_n2,
        e_p,
        relation,
    }
}

/// Counts the edges `(head, relation, tail)` whose head equals the candidate
/// pseudo-eventuality off-placeholder, whose tail equals the pronoun
/// pseudo-eventuality off-placeholder, and whose two placeholder-position
/// words are identical.
pub fn count_supporting_edges(
    graph: &KnowledgeGraph,
    e_n: &PseudoEventuality,
    e_p: &PseudoEventuality,
    relation: RelationType,
) -> usize {
    graph
        .edges()
        .filter(|edge| edge.weights.get(&relation).copied().unwrap_or(0.0) > 0.0)
        .filter(|edge| {
            let (Some(head), Some(tail)) = (
                graph.eventuality(&edge.head_key),
                graph.eventuality(&edge.tail_key),
            ) else {
                return false;
            };
            e_n.matches(head)
                && e_p.matches(tail)
                && e_n.placeholder_word(head) == e_p.placeholder_word(tail)
        })
        .count()
}

/// The outcome of one question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub id: String,
    pub prediction: Option<Candidate>,
    pub f_n1: usize,
    pub f_n2: usize,
    pub relation: RelationType,
    pub gold: Option<Candidate>,
    pub correct: Option<bool>,
}

/// Scores both candidates and predicts the strictly higher one; equal scores
/// (including 0–0) abstain.
pub fn resolve(graph: &KnowledgeGraph, question: &WscQuestion) -> Resolution {
    let prepared = prepare(question);
    let support = |e_n: &Option<PseudoEventuality>| -> usize {
        match (e_n, &prepared.e_p) {
            (Some(en), Some(ep)) => count_supporting_edges(graph, en, ep, prepared.relation),
            _ => 0,
        }
    };
    let f_n1 = support(&prepared.e_n1);
    let f_n2 = support(&prepared.e_n2);
    let prediction = match f_n1.cmp(&f_n2) {
        std::cmp::Ordering::Greater => Some(Candidate::N1),
        std::cmp::Ordering::Less => Some(Candidate::N2),
        std::cmp::Ordering::Equal => None,
    };
    let correct = match (prediction, question.answer) {
        (Some(p), Some(g)) => Some(p == g),
        _ => None,
    };
    Resolution {
        id: question.id.clone(),
        prediction,
        f_n1,
        f_n2,
        relation: prepared.relation,
        gold: question.answer,
        correct,
    }
}

/// Aggregate report over a question set. `a_p` excludes abstentions;
/// `a_o` scores each abstention as half a correct answer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WscReport {
    pub convention: String,
    pub questions: Vec<Resolution>,
    pub correct: usize,
    pub wrong: usize,
    pub na: usize,
    pub a_p: Option<f64>,
    pub a_o: f64,
}

pub fn run_questions(graph: &KnowledgeGraph, questions: &[WscQuestion]) -> WscReport {
    let resolutions: Vec<Resolution> = questions.iter().map(|q| resolve(graph, q)).collect();
    let correct = resolutions.iter().filter(|r| r.correct == Some(true)).count();
    let wrong = resolutions.iter().filter(|r| r.correct == Some(false)).count();
    let na = resolutions.len() - correct - wrong;
    let a_p = (correct + wrong > 0).then(|| correct as f64 / (correct + wrong) as f64);
    let a_o = if resolutions.is_empty() {
        0.0
    } else {
        (correct as f64 + 0.5 * na as f64) / resolutions.len() as f64
    };
    WscReport {
        convention: "abstentions count as half-credit random guesses in a_o".to_string(),
        questions: resolutions,
        correct,
        wrong,
        na,
        a_p,
        a_o,
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct QuestionRecord {
    id: String,
    #[serde(default)]
    text: String,
    /// (form, upos, head, deprel) per token, 1-based heads.
    tokens: Vec<(String, String, usize, String)>,
    n1: usize,
    n2: usize,
    p: usize,
    #[serde(default)]
    answer: Option<Candidate>,
}

/// Reads the JSON Lines question format: pre-parsed sentence tokens plus
/// candidate and pronoun token positions.
pub fn parse_questions<R: BufRead>(reader: R) -> Result<Vec<WscQuestion>, WscError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: QuestionRecord = serde_json::from_str(&line).map_err(|e| WscError::BadQuestion {
            line: i + 1,
            message: e.to_string(),
        })?;
        let tokens: Vec<Token> = rec
            .tokens
            .iter()
            .enumerate()
            .map(|(j, (form, upos, head, deprel))| Token {
                index: j + 1,
                form: form.to_lowercase(),
                upos: upos.clone(),
                head: *head,
                deprel: deprel.clone(),
            })
            .collect();
        let graph = DependencyGraph {
            sentence_id: rec.id.clone(),
            text: rec.text,
            tokens,
        };
        graph.validate_tree().map_err(|reason| WscError::BadQuestion {
            line: i + 1,
            message: reason,
        })?;
        let n = graph.tokens.len();
        if rec.n1 == rec.n2 || rec.p == rec.n1 || rec.p == rec.n2 {
            return Err(WscError::BadQuestion {
                line: i + 1,
                message: "candidates and pronoun must be distinct tokens".to_string(),
            });
        }
        for (field, v) in [("n1", rec.n1), ("n2", rec.n2), ("p", rec.p)] {
            if v == 0 || v > n {
                return Err(WscError::BadQuestion {
                    line: i + 1,
                    message: format!("{field} = {v} is outside the sentence"),
                });
            }
        }
        out.push(WscQuestion {
            id: rec.id,
            graph,
            n1: rec.n1,
            n2: rec.n2,
            pronoun: rec.p,
            answer: rec.answer,
        });
    }
    Ok(out)
}

/// Swaps the two candidates of a question (used by the symmetry tests).
pub fn swap_candidates(q: &WscQuestion) -> WscQuestion {
    let mut swapped = q.clone();
    std::mem::swap(&mut swapped.n1, &mut swapped.n2);
    swapped.answer = q.answer.map(Candidate::flipped);
    swapped
}
