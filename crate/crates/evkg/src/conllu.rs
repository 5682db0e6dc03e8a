//! CoNLL-U ingestion: streaming sentence reader, tree validation, and the
//! clause filter applied before eventuality extraction.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::BufRead;

/// One token of a parsed sentence. `index` and `head` are 1-based sentence
/// positions; `head == 0` marks the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub index: usize,
    pub form: String,
    pub upos: String,
    pub head: usize,
    pub deprel: String,
}

/// A dependency-parsed sentence: tokens plus the labeled head→dependent edges
/// implied by their `head`/`deprel` fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyGraph {
    pub sentence_id: String,
    pub tokens: Vec<Token>,
    pub text: String,
}

impl DependencyGraph {
    /// Token at 1-based position, if any.
    pub fn token(&self, index: usize) -> Option<&Token> {
        if index == 0 {
            return None;
        }
        self.tokens.get(index - 1)
    }

    /// Dependents of the token at `gov` (1-based), in sentence order.
    pub fn dependents(&self, gov: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == gov)
    }

    /// Checks the single-root, in-range, acyclic tree invariant.
    pub fn validate_tree(&self) -> Result<(), String> {
        let n = self.tokens.len();
        if n == 0 {
            return Err("sentence has no tokens".to_string());
        }
        let mut roots = 0;
        for t in &self.tokens {
            if t.head == t.index {
                return Err(format!("token {} is its own head", t.index));
            }
            if t.head > n {
                return Err(format!(
                    "token {} has head {} outside the sentence",
                    t.index, t.head
                ));
            }
            if t.head == 0 {
                roots += 1;
            }
        }
        if roots != 1 {
            return Err(format!("expected exactly one root, found {roots}"));
        }
        // Walk each token up to the root; more than n hops means a cycle.
        for t in &self.tokens {
            let mut cur = t.head;
            let mut hops = 0;
            while cur != 0 {
                cur = self.tokens[cur - 1].head;
                hops += 1;
                if hops > n {
                    return Err(format!("cyclic heads reachable from token {}", t.index));
                }
            }
        }
        Ok(())
    }

    /// Serializes back to a CoNLL-U block covering the consumed columns
    /// (ID, FORM, UPOS, HEAD, DEPREL); the others are emitted as `_`.
    pub fn to_conllu(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# sent_id = {}", self.sentence_id);
        let _ = writeln!(out, "# text = {}", self.text);
        for t in &self.tokens {
            let _ = writeln!(
                out,
                "{}\t{}\t_\t{}\t_\t_\t{}\t{}\t_\t_",
                t.index, t.form, t.upos, t.head, t.deprel
            );
        }
        out.push('\n');
        out
    }
}

/// Recoverable per-sentence ingestion failure. The reader keeps yielding
/// later sentences after reporting one of these.
#[derive(Debug, Clone, thiserror::Error)]
pub enum IngestError {
    #[error("line {line}: expected 10 tab-separated columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: invalid {field}: `{value}`")]
    BadField {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("sentence `{sentence_id}` ending at line {line}: {reason}")]
    BadTree {
        sentence_id: String,
        line: usize,
        reason: String,
    },
}

/// Label dialect normalization applied at ingestion when the input was
/// produced by a UD-v2 parser. The native dialect of the pattern inventory
/// uses dobj/nmod/nsubjpass/auxpass labels.
pub fn normalize_ud2_label(deprel: &str) -> &str {
    match deprel {
        "obj" => "dobj",
        "obl" => "nmod",
        "nsubj:pass" => "nsubjpass",
        "aux:pass" => "auxpass",
        "csubj:pass" => "csubjpass",
        other => other,
    }
}

/// Dependency labels whose presence marks a sentence as containing an
/// embedded clause. advcl, conj, and xcomp are deliberately absent: xcomp is
/// part of the pattern inventory and advcl/conj carry the inter-eventuality
/// connectives mined later.
pub const DEFAULT_CLAUSAL_LABELS: [&str; 6] = [
    "ccomp",
    "csubj",
    "csubjpass",
    "acl",
    "acl:relcl",
    "parataxis",
];

/// The configurable clausal-label set backing [`is_clausal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClausalFilter {
    labels: BTreeSet<String>,
}

impl Default for ClausalFilter {
    fn default() -> Self {
        ClausalFilter {
            labels: DEFAULT_CLAUSAL_LABELS
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

impl ClausalFilter {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(labels: I) -> Self {
        ClausalFilter {
            labels: labels.into_iter().map(Into::into).collect(),
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(|s| s.as_str())
    }

    /// True iff any token's deprel is in the clausal set. Pure function of
    /// the sentence's deprel multiset.
    pub fn is_clausal(&self, graph: &DependencyGraph) -> bool {
        graph
            .tokens
            .iter()
            .any(|t| self.labels.contains(&t.deprel))
    }
}

/// `is_clausal` under the default label set.
pub fn is_clausal(graph: &DependencyGraph) -> bool {
    ClausalFilter::default().is_clausal(graph)
}

/// Streaming CoNLL-U reader. Yields one item per sentence block; malformed
/// blocks surface as `Err` without stopping the stream.
pub struct ConlluReader<R: BufRead> {
    lines: std::iter::Enumerate<std::io::Lines<R>>,
    ud2: bool,
    next_auto_id: usize,
    done: bool,
}

impl<R: BufRead> ConlluReader<R> {
    pub fn new(reader: R) -> Self {
        ConlluReader {
            lines: reader.lines().enumerate(),
            ud2: false,
            next_auto_id: 0,
            done: false,
        }
    }

    /// Enables UD-v2 label normalization (see [`normalize_ud2_label`]).
    pub fn with_ud2(mut self, ud2: bool) -> Self {
        self.ud2 = ud2;
        self
    }

    fn parse_block(
        &mut self,
        rows: Vec<(usize, String)>,
        last_line: usize,
    ) -> Result<DependencyGraph, IngestError> {
        let mut sent_id = None;
        let mut text = None;
        let mut tokens = Vec::new();
        for (line_no, line) in rows {
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(v) = rest.strip_prefix("sent_id =") {
                    sent_id = Some(v.trim().to_string());
                } else if let Some(v) = rest.strip_prefix("text =") {
                    text = Some(v.trim().to_string());
                }
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 10 {
                return Err(IngestError::ColumnCount {
                    line: line_no,
                    found: cols.len(),
                });
            }
            // Skip multiword-token ranges (`3-4`) and empty nodes (`3.1`).
            if cols[0].contains('-') || cols[0].contains('.') {
                continue;
            }
            let index: usize = cols[0].parse().map_err(|_| IngestError::BadField {
                line: line_no,
                field: "ID",
                value: cols[0].to_string(),
            })?;
            let head: usize = cols[6].parse().map_err(|_| IngestError::BadField {
                line: line_no,
                field: "HEAD",
                value: cols[6].to_string(),
            })?;
            let form = cols[1].to_lowercase();
            if form.is_empty() {
                return Err(IngestError::BadField {
                    line: line_no,
                    field: "FORM",
                    value: String::new(),
                });
            }
            let deprel = if self.ud2 {
                normalize_ud2_label(cols[7]).to_string()
            } else {
                cols[7].to_string()
            };
            tokens.push(Token {
                index,
                form,
                upos: cols[3].to_string(),
                head,
                deprel,
            });
        }
        self.next_auto_id += 1;
        let sentence_id = sent_id.unwrap_or_else(|| format!("s{}", self.next_auto_id));
        let text =
            text.unwrap_or_else(|| tokens.iter().map(|t| t.form.as_str()).collect::<Vec<_>>().join(" "));
        // Re-index defensively: token IDs must be 1..n in order.
        for (i, t) in tokens.iter().enumerate() {
            if t.index != i + 1 {
                return Err(IngestError::BadField {
                    line: last_line,
                    field: "ID",
                    value: format!("expected {} found {}", i + 1, t.index),
                });
            }
        }
        let graph = DependencyGraph {
            sentence_id,
            tokens,
            text,
        };
        graph.validate_tree().map_err(|reason| IngestError::BadTree {
            sentence_id: graph.sentence_id.clone(),
            line: last_line,
            reason,
        })?;
        Ok(graph)
    }
}

impl<R: BufRead> Iterator for ConlluReader<R> {
    type Item = Result<DependencyGraph, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut rows: Vec<(usize, String)> = Vec::new();
        let mut last_line = 0;
        loop {
            match self.lines.next() {
                Some((idx, Ok(line))) => {
                    let line_no = idx + 1;
                    if line.trim().is_empty() {
                        if rows.iter().any(|(_, l)| !l.starts_with('#')) {
                            return Some(self.parse_block(std::mem::take(&mut rows), line_no));
                        }
                        rows.clear();
                        continue;
                    }
                    last_line = line_no;
                    rows.push((line_no, line));
                }
                Some((idx, Err(e))) => {
                    self.done = true;
                    return Some(Err(IngestError::BadField {
                        line: idx + 1,
                        field: "stream",
                        value: e.to_string(),
                    }));
                }
                None => {
                    self.done = true;
                    if rows.iter().any(|(_, l)| !l.starts_with('#')) {
                        return Some(self.parse_block(std::mem::take(&mut rows), last_line));
                    }
                    return None;
                }
            }
        }
    }
}

/// Parses a whole stream, returning sentences and recoverable errors
/// side by side.
pub fn parse_conllu<R: BufRead>(reader: R, ud2: bool) -> (Vec<DependencyGraph>, Vec<IngestError>) {
    let mut graphs = Vec::new();
    let mut errors = Vec::new();
    for item in ConlluReader::new(reader).with_ud2(ud2) {
        match item {
            Ok(g) => graphs.push(g),
            Err(e) => errors.push(e),
        }
    }
    (graphs, errors)
}
