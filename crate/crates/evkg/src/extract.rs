//! Pattern matching against parsed sentences: bind the positive edges around
//! a center word, collect optional modifiers, and disqualify on leftover
//! structural edges.

use crate::conllu::DependencyGraph;
use crate::eventuality::{EventEdge, EventWord, Eventuality};
use crate::pattern::{
    builtin_patterns, is_be_form, is_optional_label, CenterKind, Pattern, CENTER_SLOT,
    STRUCTURAL_LABELS, WordClass,
};
use std::collections::BTreeSet;

/// True iff the token at `index` can anchor a pattern: a normal verb, or an
/// adjectival/nominal head governing a `cop` edge.
pub fn is_candidate_center(graph: &DependencyGraph, index: usize) -> bool {
    let Some(tok) = graph.token(index) else {
        return false;
    };
    if tok.upos == "VERB" && !is_be_form(&tok.form) {
        return true;
    }
    if matches!(tok.upos.as_str(), "ADJ" | "NOUN")
        && graph.dependents(index).any(|d| d.deprel == "cop")
    {
        return true;
    }
    false
}

/// Tries to match one pattern at one center. Absence is a normal outcome.
pub fn match_pattern(graph: &DependencyGraph, center: usize, pattern: &Pattern) -> Option<Eventuality> {
    let center_tok = graph.token(center)?;
    let center_ok = match pattern.center {
        CenterKind::Verb => WordClass::Verb.accepts(&center_tok.upos, &center_tok.form),
        CenterKind::CopularHead => WordClass::Adj.accepts(&center_tok.upos, &center_tok.form),
    };
    if !center_ok {
        return None;
    }

    // Bind positive templates in order; slot 0 is the center.
    let mut slots: Vec<Option<usize>> = vec![None; pattern.slot_count()];
    slots[CENTER_SLOT.0 as usize] = Some(center);
    let mut consumed: Vec<(usize, usize)> = Vec::new(); // (gov, dep) sentence positions
    let mut edges: Vec<(usize, usize, String)> = Vec::new();
    for tpl in &pattern.positive {
        let gov = slots[tpl.gov.0 as usize].expect("templates bind in order");
        let dep = graph
            .dependents(gov)
            .find(|d| {
                d.deprel == tpl.relation
                    && tpl.dep_class.accepts(&d.upos, &d.form)
                    && !slots.contains(&Some(d.index))
            })
            .map(|d| d.index)?;
        slots[tpl.dep.0 as usize] = Some(dep);
        consumed.push((gov, dep));
        edges.push((gov, dep, tpl.relation.to_string()));
    }
    let bound: BTreeSet<usize> = slots.iter().flatten().copied().collect();

    // Collect optional modifiers one hop off bound words.
    let mut members = bound.clone();
    for &b in &bound {
        for d in graph.dependents(b) {
            if is_optional_label(&d.deprel) && !members.contains(&d.index) {
                members.insert(d.index);
                consumed.push((b, d.index));
                edges.push((b, d.index, d.deprel.clone()));
            }
        }
    }

    // Any leftover structural edge touching a member word means the pattern
    // does not cover the whole construction; disqualify.
    for tok in &graph.tokens {
        if tok.head == 0 {
            continue;
        }
        if !(members.contains(&tok.head) || members.contains(&tok.index)) {
            continue;
        }
        if consumed.contains(&(tok.head, tok.index)) {
            continue;
        }
        if STRUCTURAL_LABELS.contains(&tok.deprel.as_str()) {
            return None;
        }
    }

    let positions: Vec<usize> = members.iter().copied().collect();
    let local = |pos: usize| positions.iter().position(|&p| p == pos).unwrap();
    let words = positions
        .iter()
        .map(|&p| {
            let t = graph.token(p).unwrap();
            EventWord {
                position: p,
                form: t.form.clone(),
                upos: t.upos.clone(),
            }
        })
        .collect();
    let edges = edges
        .into_iter()
        .map(|(g, d, relation)| EventEdge {
            gov: local(g),
            dep: local(d),
            relation,
        })
        .collect();
    Some(Eventuality {
        words,
        edges,
        pattern: pattern.code,
        frequency: 1,
    })
}

/// All patterns matching at one center, in inventory order. The negative
/// sets make this a singleton or empty for well-formed parses; the sweep
/// test in the acceptance suite checks exactly that.
pub fn matching_patterns(graph: &DependencyGraph, center: usize) -> Vec<Eventuality> {
    builtin_patterns()
        .iter()
        .filter_map(|p| match_pattern(graph, center, p))
        .collect()
}

/// Extracts the eventualities of one sentence: every candidate center is
/// tried against all 14 patterns; a center bound inside another center's
/// match (xcomp chains) is not re-extracted alone.
pub fn extract_eventualities(graph: &DependencyGraph) -> Vec<Eventuality> {
    extract_with_patterns(graph, &builtin_patterns())
}

/// Extraction against a caller-held pattern inventory, so corpus passes can
/// build the inventory once.
pub fn extract_with_patterns(graph: &DependencyGraph, patterns: &[Pattern]) -> Vec<Eventuality> {
    let mut matches: Vec<(usize, Eventuality)> = Vec::new();
    for tok in &graph.tokens {
        if !is_candidate_center(graph, tok.index) {
            continue;
        }
        if let Some(e) = patterns
            .iter()
            .find_map(|p| match_pattern(graph, tok.index, p))
        {
            matches.push((tok.index, e));
        }
    }
    // The governing verb's pattern wins a tie over a claimed center.
    let claimed: Vec<BTreeSet<usize>> = matches
        .iter()
        .map(|(_, e)| e.positions().collect())
        .collect();
    matches
        .iter()
        .enumerate()
        .filter(|(i, (center, _))| {
            !claimed
                .iter()
                .enumerate()
                .any(|(j, set)| j != *i && set.contains(center) && !claimed[*i].contains(&matches[j].0))
        })
        .map(|(_, (_, e))| e.clone())
        .collect()
}
