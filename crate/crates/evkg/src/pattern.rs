//! The 14 built-in eventuality patterns: positive (required), optional
//! (collectible), and negative (disqualifying) dependency-edge templates
//! around a center word.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Forms treated as the copular/auxiliary verb `be`.
pub const BE_FORMS: [&str; 11] = [
    "be", "am", "is", "are", "was", "were", "been", "being", "'s", "'m", "'re",
];

pub fn is_be_form(form: &str) -> bool {
    BE_FORMS.contains(&form)
}

/// The six dependency labels collectible from any matched word.
pub const OPTIONAL_LABELS: [&str; 6] = ["advmod", "amod", "nummod", "aux", "compound", "neg"];

/// True iff `deprel` is collectible as an optional edge. `auxpass` rides on
/// the `aux` label so passive auxiliaries stay inside the eventuality.
pub fn is_optional_label(deprel: &str) -> bool {
    OPTIONAL_LABELS.contains(&deprel) || deprel == "auxpass"
}

/// Union of every pattern's positive labels. An unconsumed edge carrying one
/// of these, incident to a matched word, disqualifies the match; everything
/// else (det, mark, cc, punct, ...) is ignored. This is what makes the
/// patterns mutually exclusive while keeping `The dog barks` extractable.
pub const STRUCTURAL_LABELS: [&str; 8] = [
    "nsubj",
    "nsubjpass",
    "dobj",
    "iobj",
    "xcomp",
    "cop",
    "nmod",
    "case",
];

/// Coarse word-class constraint on a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WordClass {
    /// NOUN, PROPN, or PRON.
    Noun,
    /// ADJ.
    Adj,
    /// UPOS VERB that is not a be-form.
    Verb,
    /// Any be-form (matched on the surface form, not UPOS).
    Be,
    /// ADP.
    Prep,
}

impl WordClass {
    pub fn accepts(self, upos: &str, form: &str) -> bool {
        match self {
            WordClass::Noun => matches!(upos, "NOUN" | "PROPN" | "PRON"),
            WordClass::Adj => upos == "ADJ",
            WordClass::Verb => upos == "VERB" && !is_be_form(form),
            WordClass::Be => is_be_form(form),
            WordClass::Prep => upos == "ADP",
        }
    }
}

/// Symbolic endpoint of an edge template. Slot 0 is always the center word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotId(pub u8);

pub const CENTER_SLOT: SlotId = SlotId(0);

/// One required dependency edge: `gov -relation-> dep`, with a word-class
/// constraint on the newly bound dependent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTemplate {
    pub relation: &'static str,
    pub gov: SlotId,
    pub dep: SlotId,
    pub dep_class: WordClass,
}

/// What kind of token anchors the pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CenterKind {
    /// A normal verb (UPOS VERB, not a be-form).
    Verb,
    /// An adjectival head governing a `cop` edge.
    CopularHead,
}

/// Codes of the 14 built-in patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternCode {
    #[serde(rename = "s-v")]
    SV,
    #[serde(rename = "s-v-o")]
    SVO,
    #[serde(rename = "s-v-a")]
    SVA,
    #[serde(rename = "s-v-o-o")]
    SVOO,
    #[serde(rename = "s-be-a")]
    SBeA,
    #[serde(rename = "s-v-be-a")]
    SVBeA,
    #[serde(rename = "s-v-be-o")]
    SVBeO,
    #[serde(rename = "s-v-v-o")]
    SVVO,
    #[serde(rename = "s-v-v")]
    SVV,
    #[serde(rename = "s-be-a-p-o")]
    SBeAPO,
    #[serde(rename = "s-v-p-o")]
    SVPO,
    #[serde(rename = "s-v-o-p-o")]
    SVOPO,
    #[serde(rename = "spass-v")]
    SpassV,
    #[serde(rename = "spass-v-p-o")]
    SpassVPO,
}

impl PatternCode {
    pub const ALL: [PatternCode; 14] = [
        PatternCode::SV,
        PatternCode::SVO,
        PatternCode::SVA,
        PatternCode::SVOO,
        PatternCode::SBeA,
        PatternCode::SVBeA,
        PatternCode::SVBeO,
        PatternCode::SVVO,
        PatternCode::SVV,
        PatternCode::SBeAPO,
        PatternCode::SVPO,
        PatternCode::SVOPO,
        PatternCode::SpassV,
        PatternCode::SpassVPO,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternCode::SV => "s-v",
            PatternCode::SVO => "s-v-o",
            PatternCode::SVA => "s-v-a",
            PatternCode::SVOO => "s-v-o-o",
            PatternCode::SBeA => "s-be-a",
            PatternCode::SVBeA => "s-v-be-a",
            PatternCode::SVBeO => "s-v-be-o",
            PatternCode::SVVO => "s-v-v-o",
            PatternCode::SVV => "s-v-v",
            PatternCode::SBeAPO => "s-be-a-p-o",
            PatternCode::SVPO => "s-v-p-o",
            PatternCode::SVOPO => "s-v-o-p-o",
            PatternCode::SpassV => "spass-v",
            PatternCode::SpassVPO => "spass-v-p-o",
        }
    }
}

impl fmt::Display for PatternCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown pattern code `{0}`")]
pub struct ParsePatternCodeError(pub String);

impl FromStr for PatternCode {
    type Err = ParsePatternCodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PatternCode::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| ParsePatternCodeError(s.to_string()))
    }
}

/// One of the 14 extraction templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub code: PatternCode,
    pub center: CenterKind,
    pub positive: Vec<EdgeTemplate>,
    /// Shared optional labels (see [`OPTIONAL_LABELS`]).
    pub optional: &'static [&'static str],
    /// Structural labels that disqualify a match for this pattern.
    pub negative: BTreeSet<&'static str>,
}

impl Pattern {
    /// Number of slots (center plus dependents bound by positive templates).
    pub fn slot_count(&self) -> usize {
        1 + self.positive.len()
    }
}

fn tpl(relation: &'static str, gov: u8, dep: u8, dep_class: WordClass) -> EdgeTemplate {
    EdgeTemplate {
        relation,
        gov: SlotId(gov),
        dep: SlotId(dep),
        dep_class,
    }
}

fn pattern(code: PatternCode, center: CenterKind, positive: Vec<EdgeTemplate>) -> Pattern {
    let own: BTreeSet<&str> = positive.iter().map(|t| t.relation).collect();
    let negative = STRUCTURAL_LABELS
        .iter()
        .copied()
        .filter(|l| !own.contains(l))
        .collect();
    Pattern {
        code,
        center,
        positive,
        optional: &OPTIONAL_LABELS,
        negative,
    }
}

/// The full built-in inventory, in a fixed order.
pub fn builtin_patterns() -> Vec<Pattern> {
    use CenterKind::{CopularHead, Verb};
    use WordClass::{Adj, Be, Noun, Prep};
    vec![
        pattern(PatternCode::SV, Verb, vec![tpl("nsubj", 0, 1, Noun)]),
        pattern(
            PatternCode::SVO,
            Verb,
            vec![tpl("nsubj", 0, 1, Noun), tpl("dobj", 0, 2, Noun)],
        ),
        pattern(
            PatternCode::SVA,
            Verb,
            vec![tpl("nsubj", 0, 1, Noun), tpl("xcomp", 0, 2, Adj)],
        ),
        pattern(
            PatternCode::SVOO,
            Verb,
            vec![
                tpl("nsubj", 0, 1, Noun),
                tpl("iobj", 0, 2, Noun),
                tpl("dobj", 0, 3, Noun),
            ],
        ),
        pattern(
            PatternCode::SBeA,
            CopularHead,
            vec![tpl("nsubj", 0, 1, Noun), tpl("cop", 0, 2, Be)],
        ),
        pattern(
            PatternCode::SVBeA,
            Verb,
            vec![
                tpl("nsubj", 0, 1, Noun),
                tpl("xcomp", 0, 2, Adj),
                tpl("cop", 2, 3, Be),
            ],
        ),
        pattern(
            PatternCode::SVBeO,
            Verb,
            vec![
                tpl("nsubj", 0, 1, Noun),
                tpl("xcomp", 0, 2, Noun),
                tpl("cop", 2, 3, Be),
            ],
        ),
        pattern(
            PatternCode::SVVO,
            Verb,
            vec![
                tpl("nsubj", 0, 1, Noun),
                tpl("xcomp", 0, 2, WordClass::Verb),
                tpl("dobj", 2, 3, Noun),
            ],
        ),
        pattern(
            PatternCode::SVV,
            Verb,
            vec![
                tpl("nsubj", 0, 1, Noun),
                tpl("xcomp", 0, 2, WordClass::Verb),
            ],
        ),
        pattern(
            PatternCode::SBeAPO,
            CopularHead,
            vec![
                tpl("nsubj", 0, 1, Noun),
                tpl("cop", 0, 2, Be),
                tpl("nmod", 0, 3, Noun),
                tpl("case", 3, 4, Prep),
            ],
        ),
        pattern(
            PatternCode::SVPO,
            Verb,
            vec![
                tpl("nsubj", 0, 1, Noun),
                tpl("nmod", 0, 2, Noun),
                tpl("case", 2, 3, Prep),
            ],
        ),
        pattern(
            PatternCode::SVOPO,
            Verb,
            vec![
                tpl("nsubj", 0, 1, Noun),
                tpl("dobj", 0, 2, Noun),
                tpl("nmod", 0, 3, Noun),
                tpl("case", 3, 4, Prep),
            ],
        ),
        pattern(PatternCode::SpassV, Verb, vec![tpl("nsubjpass", 0, 1, Noun)]),
        pattern(
            PatternCode::SpassVPO,
            Verb,
            vec![
                tpl("nsubjpass", 0, 1, Noun),
                tpl("nmod", 0, 2, Noun),
                tpl("case", 2, 3, Prep),
            ],
        ),
    ]
}
