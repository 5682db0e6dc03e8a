//! Relation types between eventualities and their category grouping.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The five relation categories. Four of them are trainable (each gets its
/// own classifier during bootstrapping); `CoOccurrence` is purely positional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    Temporal,
    Contingency,
    Comparison,
    Expansion,
    CoOccurrence,
}

impl Category {
    /// The four categories that carry typed, classifier-learnable relations.
    pub const TRAINABLE: [Category; 4] = [
        Category::Temporal,
        Category::Contingency,
        Category::Comparison,
        Category::Expansion,
    ];

    /// Directed relation types belonging to this category.
    pub fn types(self) -> &'static [RelationType] {
        use RelationType::*;
        match self {
            Category::Temporal => &[Precedence, Succession, Synchronous],
            Category::Contingency => &[Reason, Result, Condition],
            Category::Comparison => &[Contrast, Concession],
            Category::Expansion => &[
                Conjunction,
                Instantiation,
                Restatement,
                Alternative,
                ChosenAlternative,
                Exception,
            ],
            Category::CoOccurrence => &[RelationType::CoOccurrence],
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Category::Temporal => "Temporal",
            Category::Contingency => "Contingency",
            Category::Comparison => "Comparison",
            Category::Expansion => "Expansion",
            Category::CoOccurrence => "Co_Occurrence",
        };
        f.write_str(s)
    }
}

/// The 14 directed relation types plus the positional co-occurrence relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationType {
    Precedence,
    Succession,
    Synchronous,
    Reason,
    Result,
    Condition,
    Contrast,
    Concession,
    Conjunction,
    Instantiation,
    Restatement,
    Alternative,
    ChosenAlternative,
    Exception,
    #[serde(rename = "Co_Occurrence")]
    CoOccurrence,
}

impl RelationType {
    pub const ALL: [RelationType; 15] = [
        RelationType::Precedence,
        RelationType::Succession,
        RelationType::Synchronous,
        RelationType::Reason,
        RelationType::Result,
        RelationType::Condition,
        RelationType::Contrast,
        RelationType::Concession,
        RelationType::Conjunction,
        RelationType::Instantiation,
        RelationType::Restatement,
        RelationType::Alternative,
        RelationType::ChosenAlternative,
        RelationType::Exception,
        RelationType::CoOccurrence,
    ];

    /// The 14 typed (non-co-occurrence) relations.
    pub fn typed() -> impl Iterator<Item = RelationType> {
        Self::ALL
            .into_iter()
            .filter(|r| *r != RelationType::CoOccurrence)
    }

    pub fn category(self) -> Category {
        use RelationType::*;
        match self {
            Precedence | Succession | Synchronous => Category::Temporal,
            Reason | Result | Condition => Category::Contingency,
            Contrast | Concession => Category::Comparison,
            Conjunction | Instantiation | Restatement | Alternative | ChosenAlternative
            | Exception => Category::Expansion,
            CoOccurrence => Category::CoOccurrence,
        }
    }

    pub fn name(self) -> &'static str {
        use RelationType::*;
        match self {
            Precedence => "Precedence",
            Succession => "Succession",
            Synchronous => "Synchronous",
            Reason => "Reason",
            Result => "Result",
            Condition => "Condition",
            Contrast => "Contrast",
            Concession => "Concession",
            Conjunction => "Conjunction",
            Instantiation => "Instantiation",
            Restatement => "Restatement",
            Alternative => "Alternative",
            ChosenAlternative => "ChosenAlternative",
            Exception => "Exception",
            CoOccurrence => "Co_Occurrence",
        }
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown relation type `{0}`")]
pub struct ParseRelationTypeError(pub String);

impl FromStr for RelationType {
    type Err = ParseRelationTypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationType::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ParseRelationTypeError(s.to_string()))
    }
}
