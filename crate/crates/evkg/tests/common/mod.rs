//! Shared fixtures and independent oracles for the integration suites.

#![allow(dead_code)]

use evkg::eventuality::{EventEdge, EventWord, Eventuality};
use evkg::kg::KnowledgeGraph;
use evkg::pattern::PatternCode;
use evkg::relation::RelationType;
use evkg::seeds::TrainingInstance;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Renders a token table into one CoNLL-U sentence block.
pub fn conllu_block(sent_id: &str, rows: &[(&str, &str, usize, &str)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# sent_id = {sent_id}");
    let text: Vec<&str> = rows.iter().map(|r| r.0).collect();
    let _ = writeln!(out, "# text = {}", text.join(" "));
    for (i, (form, upos, head, deprel)) in rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}\t{}\t_\t{}\t_\t_\t{}\t{}\t_\t_",
            i + 1,
            form,
            upos,
            head,
            deprel
        );
    }
    out.push('\n');
    out
}

/// One sentence per Table-style pattern family, in inventory order, with
/// the pattern code and expected word set of each.
pub fn pattern_sentences() -> Vec<(&'static str, PatternCode, Vec<(&'static str, &'static str, usize, &'static str)>, Vec<&'static str>)> {
    use PatternCode::*;
    vec![
        (
            "t01",
            SV,
            vec![
                ("The", "DET", 2, "det"),
                ("dog", "NOUN", 3, "nsubj"),
                ("barks", "VERB", 0, "root"),
            ],
            vec!["dog", "barks"],
        ),
        (
            "t02",
            SVO,
            vec![
                ("I", "PRON", 2, "nsubj"),
                ("love", "VERB", 0, "root"),
                ("you", "PRON", 2, "dobj"),
            ],
            vec!["i", "love", "you"],
        ),
        (
            "t03",
            SVA,
            vec![
                ("He", "PRON", 2, "nsubj"),
                ("felt", "VERB", 0, "root"),
                ("ill", "ADJ", 2, "xcomp"),
            ],
            vec!["he", "felt", "ill"],
        ),
        (
            "t04",
            SVOO,
            vec![
                ("You", "PRON", 2, "nsubj"),
                ("give", "VERB", 0, "root"),
                ("me", "PRON", 2, "iobj"),
                ("the", "DET", 5, "det"),
                ("book", "NOUN", 2, "dobj"),
            ],
            vec!["you", "give", "me", "book"],
        ),
        (
            "t05",
            SBeA,
            vec![
                ("The", "DET", 2, "det"),
                ("dog", "NOUN", 4, "nsubj"),
                ("is", "AUX", 4, "cop"),
                ("cute", "ADJ", 0, "root"),
            ],
            vec!["dog", "is", "cute"],
        ),
        (
            "t06",
            SVBeA,
            vec![
                ("I", "PRON", 2, "nsubj"),
                ("want", "VERB", 0, "root"),
                ("to", "PART", 5, "mark"),
                ("be", "AUX", 5, "cop"),
                ("slim", "ADJ", 2, "xcomp"),
            ],
            vec!["i", "want", "be", "slim"],
        ),
        (
            "t07",
            SVBeO,
            vec![
                ("I", "PRON", 2, "nsubj"),
                ("want", "VERB", 0, "root"),
                ("to", "PART", 6, "mark"),
                ("be", "AUX", 6, "cop"),
                ("a", "DET", 6, "det"),
                ("hero", "NOUN", 2, "xcomp"),
            ],
            vec!["i", "want", "be", "hero"],
        ),
        (
            "t08",
            SVVO,
            vec![
                ("I", "PRON", 2, "nsubj"),
                ("want", "VERB", 0, "root"),
                ("to", "PART", 4, "mark"),
                ("eat", "VERB", 2, "xcomp"),
                ("the", "DET", 6, "det"),
                ("apple", "NOUN", 4, "dobj"),
            ],
            vec!["i", "want", "eat", "apple"],
        ),
        (
            "t09",
            SVV,
            vec![
                ("I", "PRON", 2, "nsubj"),
                ("want", "VERB", 0, "root"),
                ("to", "PART", 4, "mark"),
                ("go", "VERB", 2, "xcomp"),
            ],
            vec!["i", "want", "go"],
        ),
        (
            "t10",
            SBeAPO,
            vec![
                ("It", "PRON", 3, "nsubj"),
                ("'s", "AUX", 3, "cop"),
                ("cheap", "ADJ", 0, "root"),
                ("for", "ADP", 6, "case"),
                ("the", "DET", 6, "det"),
                ("quality", "NOUN", 3, "nmod"),
            ],
            vec!["it", "'s", "cheap", "for", "quality"],
        ),
        (
            "t11",
            SVPO,
            vec![
                ("He", "PRON", 2, "nsubj"),
                ("walks", "VERB", 0, "root"),
                ("into", "ADP", 5, "case"),
                ("the", "DET", 5, "det"),
                ("room", "NOUN", 2, "nmod"),
            ],
            vec!["he", "walks", "into", "room"],
        ),
        (
            "t12",
            SVOPO,
            vec![
                ("He", "PRON", 2, "nsubj"),
                ("plays", "VERB", 0, "root"),
                ("soccer", "NOUN", 2, "dobj"),
                ("with", "ADP", 5, "case"),
                ("me", "PRON", 2, "nmod"),
            ],
            vec!["he", "plays", "soccer", "with", "me"],
        ),
        (
            "t13",
            SpassV,
            vec![
                ("The", "DET", 2, "det"),
                ("bill", "NOUN", 4, "nsubjpass"),
                ("is", "AUX", 4, "auxpass"),
                ("paid", "VERB", 0, "root"),
            ],
            vec!["bill", "is", "paid"],
        ),
        (
            "t14",
            SpassVPO,
            vec![
                ("The", "DET", 2, "det"),
                ("bill", "NOUN", 4, "nsubjpass"),
                ("is", "AUX", 4, "auxpass"),
                ("paid", "VERB", 0, "root"),
                ("by", "ADP", 6, "case"),
                ("me", "PRON", 4, "nmod"),
            ],
            vec!["bill", "is", "paid", "by", "me"],
        ),
    ]
}

/// The 14-sentence pattern fixture as one CoNLL-U stream.
pub fn pattern_fixture_conllu() -> String {
    pattern_sentences()
        .iter()
        .map(|(id, _, rows, _)| conllu_block(id, rows))
        .collect()
}

pub fn have_a_book_rows() -> Vec<(&'static str, &'static str, usize, &'static str)> {
    vec![
        ("I", "PRON", 2, "nsubj"),
        ("have", "VERB", 0, "root"),
        ("a", "DET", 4, "det"),
        ("book", "NOUN", 2, "dobj"),
    ]
}

/// A two-clause sentence: `<e1> , CONN <e2>` with the connective words
/// attached to the second clause head.
fn two_clause(
    id: &str,
    e1: &[(&str, &str, usize, &str)],
    connectives: &[&str],
    e2_offsetted: impl Fn(usize) -> Vec<(String, String, usize, String)>,
) -> String {
    let mut rows: Vec<(String, String, usize, String)> = e1
        .iter()
        .map(|(f, u, h, d)| (f.to_string(), u.to_string(), *h, d.to_string()))
        .collect();
    let e1_root = 1 + e1.iter().position(|(_, _, h, _)| *h == 0).unwrap();
    rows.push((",".into(), "PUNCT".into(), e1_root, "punct".into()));
    let conn_start = rows.len() + 1;
    let e2_start = conn_start + connectives.len();
    let e2_rows = e2_offsetted(e2_start - 1);
    let e2_root = e2_rows
        .iter()
        .position(|(_, _, h, _)| *h == 0)
        .map(|i| e2_start + i)
        .unwrap();
    for (i, c) in connectives.iter().enumerate() {
        if i == 0 {
            rows.push((c.to_string(), "SCONJ".into(), e2_root, "mark".into()));
        } else {
            rows.push((c.to_string(), "SCONJ".into(), conn_start, "fixed".into()));
        }
    }
    for (f, u, h, d) in e2_rows {
        let head = if d == "root" { e1_root } else { h };
        let deprel = if d == "root" { "conj".to_string() } else { d };
        rows.push((f, u, head, deprel));
    }
    let borrowed: Vec<(&str, &str, usize, &str)> = rows
        .iter()
        .map(|(f, u, h, d)| (f.as_str(), u.as_str(), *h, d.as_str()))
        .collect();
    conllu_block(id, &borrowed)
}

fn sv(subj: &'static str, verb: &'static str) -> Vec<(&'static str, &'static str, usize, &'static str)> {
    vec![(subj, "PRON", 2, "nsubj"), (verb, "VERB", 0, "root")]
}

fn sv_at(offset: usize, subj: &str, verb: &str) -> Vec<(String, String, usize, String)> {
    vec![
        (subj.to_string(), "PRON".to_string(), offset + 2, "nsubj".to_string()),
        (verb.to_string(), "VERB".to_string(), 0, "root".to_string()),
    ]
}

fn sba_at(offset: usize, subj: &str, cop: &str, adj: &str) -> Vec<(String, String, usize, String)> {
    vec![
        (subj.to_string(), "PRON".to_string(), offset + 3, "nsubj".to_string()),
        (cop.to_string(), "AUX".to_string(), offset + 3, "cop".to_string()),
        (adj.to_string(), "ADJ".to_string(), 0, "root".to_string()),
    ]
}

/// The 20-sentence connective fixture: at least one sentence per seed
/// relation type plus one `while` sentence that must produce no seed.
/// Returns the stream and the expected (sentence id, types) pairs.
pub fn connective_fixture() -> (String, Vec<(&'static str, BTreeSet<RelationType>)>) {
    use RelationType::*;
    let mut out = String::new();
    let mut expected = Vec::new();
    let mut add = |id: &'static str, block: String, types: &[RelationType]| {
        out.push_str(&block);
        expected.push((id, types.iter().copied().collect::<BTreeSet<_>>()));
    };

    // 1: before → Precedence ("i make a call before i go", no comma)
    add(
        "c01",
        conllu_block(
            "c01",
            &[
                ("i", "PRON", 2, "nsubj"),
                ("make", "VERB", 0, "root"),
                ("a", "DET", 4, "det"),
                ("call", "NOUN", 2, "dobj"),
                ("before", "SCONJ", 7, "mark"),
                ("i", "PRON", 7, "nsubj"),
                ("go", "VERB", 2, "advcl"),
            ],
        ),
        &[Precedence],
    );
    // 2: , then → Precedence
    add(
        "c02",
        conllu_block(
            "c02",
            &[
                ("i", "PRON", 2, "nsubj"),
                ("eat", "VERB", 0, "root"),
                (",", "PUNCT", 2, "punct"),
                ("then", "ADV", 6, "cc"),
                ("i", "PRON", 6, "nsubj"),
                ("sleep", "VERB", 2, "conj"),
            ],
        ),
        &[Precedence],
    );
    // 3: after → Succession
    add(
        "c03",
        two_clause("c03", &sv("he", "rests"), &["after"], |o| sv_at(o, "he", "runs")),
        &[Succession],
    );
    // 4: meanwhile → Synchronous
    add(
        "c04",
        conllu_block(
            "c04",
            &[
                ("i", "PRON", 2, "nsubj"),
                ("cook", "VERB", 0, "root"),
                (",", "PUNCT", 2, "punct"),
                ("meanwhile", "ADV", 6, "cc"),
                ("he", "PRON", 6, "nsubj"),
                ("naps", "VERB", 2, "conj"),
            ],
        ),
        &[Synchronous],
    );
    // 5: at the same time → Synchronous
    add(
        "c05",
        conllu_block(
            "c05",
            &[
                ("i", "PRON", 2, "nsubj"),
                ("read", "VERB", 0, "root"),
                (",", "PUNCT", 2, "punct"),
                ("at", "ADP", 9, "discourse"),
                ("the", "DET", 4, "fixed"),
                ("same", "ADJ", 4, "fixed"),
                ("time", "NOUN", 4, "fixed"),
                ("he", "PRON", 9, "nsubj"),
                ("cooks", "VERB", 2, "conj"),
            ],
        ),
        &[Synchronous],
    );
    // 6: because → Reason
    add(
        "c06",
        two_clause("c06", &sv("i", "sleep"), &["because"], |o| {
            sba_at(o, "i", "am", "tired")
        }),
        &[Reason],
    );
    // 7: so → Result
    add(
        "c07",
        conllu_block(
            "c07",
            &[
                ("i", "PRON", 3, "nsubj"),
                ("am", "AUX", 3, "cop"),
                ("hungry", "ADJ", 0, "root"),
                (",", "PUNCT", 3, "punct"),
                ("so", "SCONJ", 7, "cc"),
                ("i", "PRON", 7, "nsubj"),
                ("eat", "VERB", 3, "conj"),
                ("anything", "PRON", 7, "dobj"),
            ],
        ),
        &[Result],
    );
    // 8: so that → Result
    add(
        "c08",
        two_clause("c08", &sv("he", "trains"), &["so", "that"], |o| {
            sv_at(o, "he", "wins")
        }),
        &[Result],
    );
    // 9: if → Condition
    add(
        "c09",
        two_clause("c09", &sv("i", "go"), &["if"], |o| sv_at(o, "you", "come")),
        &[Condition],
    );
    // 10: as long as → Condition
    add(
        "c10",
        two_clause("c10", &sv("i", "play"), &["as", "long", "as"], |o| {
            sv_at(o, "you", "watch")
        }),
        &[Condition],
    );
    // 11: but → Contrast
    add(
        "c11",
        conllu_block(
            "c11",
            &[
                ("he", "PRON", 3, "nsubj"),
                ("is", "AUX", 3, "cop"),
                ("rich", "ADJ", 0, "root"),
                (",", "PUNCT", 3, "punct"),
                ("but", "CCONJ", 8, "cc"),
                ("she", "PRON", 8, "nsubj"),
                ("is", "AUX", 8, "cop"),
                ("poor", "ADJ", 3, "conj"),
            ],
        ),
        &[Contrast],
    );
    // 12: however → Contrast
    add(
        "c12",
        conllu_block(
            "c12",
            &[
                ("i", "PRON", 2, "nsubj"),
                ("work", "VERB", 0, "root"),
                (",", "PUNCT", 2, "punct"),
                ("however", "ADV", 6, "cc"),
                ("he", "PRON", 6, "nsubj"),
                ("rests", "VERB", 2, "conj"),
            ],
        ),
        &[Contrast],
    );
    // 13: although → Concession
    add(
        "c13",
        two_clause("c13", &sv("i", "smile"), &["although"], |o| {
            sba_at(o, "i", "am", "sad")
        }),
        &[Concession],
    );
    // 14: and → Conjunction
    add(
        "c14",
        conllu_block(
            "c14",
            &[
                ("i", "PRON", 2, "nsubj"),
                ("sing", "VERB", 0, "root"),
                ("and", "CCONJ", 5, "cc"),
                ("he", "PRON", 5, "nsubj"),
                ("dances", "VERB", 2, "conj"),
            ],
        ),
        &[Conjunction],
    );
    // 15: for example → Instantiation
    add(
        "c15",
        conllu_block(
            "c15",
            &[
                ("he", "PRON", 2, "nsubj"),
                ("helps", "VERB", 0, "root"),
                (",", "PUNCT", 2, "punct"),
                ("for", "ADP", 7, "discourse"),
                ("example", "NOUN", 4, "fixed"),
                ("he", "PRON", 7, "nsubj"),
                ("cooks", "VERB", 2, "conj"),
                ("soup", "NOUN", 7, "dobj"),
            ],
        ),
        &[Instantiation],
    );
    // 16: in other words → Restatement
    add(
        "c16",
        conllu_block(
            "c16",
            &[
                ("he", "PRON", 2, "nsubj"),
                ("wins", "VERB", 0, "root"),
                (",", "PUNCT", 2, "punct"),
                ("in", "ADP", 8, "discourse"),
                ("other", "ADJ", 4, "fixed"),
                ("words", "NOUN", 4, "fixed"),
                ("he", "PRON", 8, "nsubj"),
                ("rules", "VERB", 2, "conj"),
            ],
        ),
        &[Restatement],
    );
    // 17: or → Alternative
    add(
        "c17",
        conllu_block(
            "c17",
            &[
                ("you", "PRON", 2, "nsubj"),
                ("walk", "VERB", 0, "root"),
                ("or", "CCONJ", 5, "cc"),
                ("you", "PRON", 5, "nsubj"),
                ("ride", "VERB", 2, "conj"),
            ],
        ),
        &[Alternative],
    );
    // 18: trailing instead → ChosenAlternative
    add(
        "c18",
        conllu_block(
            "c18",
            &[
                ("he", "PRON", 2, "nsubj"),
                ("stays", "VERB", 0, "root"),
                (",", "PUNCT", 2, "punct"),
                ("he", "PRON", 5, "nsubj"),
                ("sleeps", "VERB", 2, "conj"),
                ("instead", "ADV", 5, "discourse"),
            ],
        ),
        &[ChosenAlternative],
    );
    // 19: except → Exception
    add(
        "c19",
        conllu_block(
            "c19",
            &[
                ("i", "PRON", 2, "nsubj"),
                ("eat", "VERB", 0, "root"),
                ("everything", "PRON", 2, "dobj"),
                (",", "PUNCT", 2, "punct"),
                ("except", "SCONJ", 7, "mark"),
                ("i", "PRON", 7, "nsubj"),
                ("fast", "VERB", 2, "advcl"),
            ],
        ),
        &[Exception],
    );
    // 20: while → no seed
    add(
        "c20",
        two_clause("c20", &sv("i", "read"), &["while"], |o| sv_at(o, "he", "cooks")),
        &[],
    );

    (out, expected)
}

/// A raw-text corpus of roughly two hundred parsed sentences: the hungry →
/// lunch family plus connective sentences covering all four trainable
/// categories and plain repeated filler.
pub fn smoke_corpus() -> String {
    let mut out = String::new();
    let mut n = 0usize;
    let mut push = |count: usize, rows: &[(&str, &str, usize, &str)], out: &mut String| {
        for _ in 0..count {
            n += 1;
            out.push_str(&conllu_block(&format!("s{n:03}"), rows));
        }
    };

    // the lunch family: "i be hungry , so <tail>"
    fn hungry_so(
        tail: &[(&'static str, &'static str, usize, &'static str)],
    ) -> Vec<(&'static str, &'static str, usize, &'static str)> {
        let mut rows = vec![
            ("i", "PRON", 3, "nsubj"),
            ("be", "AUX", 3, "cop"),
            ("hungry", "ADJ", 0, "root"),
            (",", "PUNCT", 3, "punct"),
        ];
        rows.extend_from_slice(tail);
        rows
    }
    push(
        6,
        &hungry_so(&[
            ("so", "SCONJ", 7, "cc"),
            ("i", "PRON", 7, "nsubj"),
            ("have", "VERB", 3, "conj"),
            ("lunch", "NOUN", 7, "dobj"),
        ]),
        &mut out,
    );
    push(
        2,
        &hungry_so(&[
            ("so", "SCONJ", 7, "cc"),
            ("i", "PRON", 7, "nsubj"),
            ("eat", "VERB", 3, "conj"),
            ("anything", "PRON", 7, "dobj"),
        ]),
        &mut out,
    );
    push(
        1,
        &hungry_so(&[
            ("so", "SCONJ", 7, "cc"),
            ("i", "PRON", 7, "nsubj"),
            ("sleep", "VERB", 3, "conj"),
        ]),
        &mut out,
    );
    // contingency, temporal, comparison, expansion seeds
    push(
        4,
        &[
            ("i", "PRON", 2, "nsubj"),
            ("sleep", "VERB", 0, "root"),
            (",", "PUNCT", 2, "punct"),
            ("because", "SCONJ", 7, "mark"),
            ("i", "PRON", 7, "nsubj"),
            ("be", "AUX", 7, "cop"),
            ("tired", "ADJ", 2, "advcl"),
        ],
        &mut out,
    );
    push(
        3,
        &[
            ("i", "PRON", 2, "nsubj"),
            ("make", "VERB", 0, "root"),
            ("a", "DET", 4, "det"),
            ("call", "NOUN", 2, "dobj"),
            ("before", "SCONJ", 7, "mark"),
            ("i", "PRON", 7, "nsubj"),
            ("go", "VERB", 2, "advcl"),
        ],
        &mut out,
    );
    push(
        3,
        &[
            ("he", "PRON", 2, "nsubj"),
            ("rests", "VERB", 0, "root"),
            ("after", "SCONJ", 5, "mark"),
            ("he", "PRON", 5, "nsubj"),
            ("runs", "VERB", 2, "advcl"),
        ],
        &mut out,
    );
    push(
        2,
        &[
            ("i", "PRON", 2, "nsubj"),
            ("cook", "VERB", 0, "root"),
            (",", "PUNCT", 2, "punct"),
            ("meanwhile", "ADV", 6, "cc"),
            ("he", "PRON", 6, "nsubj"),
            ("naps", "VERB", 2, "conj"),
        ],
        &mut out,
    );
    push(
        2,
        &[
            ("i", "PRON", 2, "nsubj"),
            ("eat", "VERB", 0, "root"),
            (",", "PUNCT", 2, "punct"),
            ("then", "ADV", 6, "cc"),
            ("i", "PRON", 6, "nsubj"),
            ("sleep", "VERB", 2, "conj"),
        ],
        &mut out,
    );
    push(
        3,
        &[
            ("i", "PRON", 2, "nsubj"),
            ("work", "VERB", 0, "root"),
            (",", "PUNCT", 2, "punct"),
            ("however", "ADV", 6, "cc"),
            ("he", "PRON", 6, "nsubj"),
            ("rests", "VERB", 2, "conj"),
        ],
        &mut out,
    );
    push(
        2,
        &[
            ("i", "PRON", 2, "nsubj"),
            ("smile", "VERB", 0, "root"),
            (",", "PUNCT", 2, "punct"),
            ("although", "SCONJ", 7, "mark"),
            ("i", "PRON", 7, "nsubj"),
            ("be", "AUX", 7, "cop"),
            ("sad", "ADJ", 2, "advcl"),
        ],
        &mut out,
    );
    push(
        3,
        &[
            ("i", "PRON", 2, "nsubj"),
            ("sing", "VERB", 0, "root"),
            ("and", "CCONJ", 5, "cc"),
            ("he", "PRON", 5, "nsubj"),
            ("dances", "VERB", 2, "conj"),
        ],
        &mut out,
    );
    push(
        2,
        &[
            ("you", "PRON", 2, "nsubj"),
            ("walk", "VERB", 0, "root"),
            ("or", "CCONJ", 5, "cc"),
            ("you", "PRON", 5, "nsubj"),
            ("ride", "VERB", 2, "conj"),
        ],
        &mut out,
    );
    push(
        2,
        &[
            ("he", "PRON", 2, "nsubj"),
            ("stays", "VERB", 0, "root"),
            (",", "PUNCT", 2, "punct"),
            ("he", "PRON", 5, "nsubj"),
            ("sleeps", "VERB", 2, "conj"),
            ("instead", "ADV", 5, "discourse"),
        ],
        &mut out,
    );
    push(
        2,
        &[
            ("i", "PRON", 2, "nsubj"),
            ("eat", "VERB", 0, "root"),
            ("everything", "PRON", 2, "dobj"),
            (",", "PUNCT", 2, "punct"),
            ("except", "SCONJ", 7, "mark"),
            ("i", "PRON", 7, "nsubj"),
            ("fast", "VERB", 2, "advcl"),
        ],
        &mut out,
    );
    push(
        2,
        &[
            ("i", "PRON", 2, "nsubj"),
            ("go", "VERB", 0, "root"),
            (",", "PUNCT", 2, "punct"),
            ("if", "SCONJ", 6, "mark"),
            ("you", "PRON", 6, "nsubj"),
            ("come", "VERB", 2, "advcl"),
        ],
        &mut out,
    );
    push(
        2,
        &[
            ("he", "PRON", 2, "nsubj"),
            ("helps", "VERB", 0, "root"),
            (",", "PUNCT", 2, "punct"),
            ("for", "ADP", 7, "discourse"),
            ("example", "NOUN", 4, "fixed"),
            ("he", "PRON", 7, "nsubj"),
            ("cooks", "VERB", 2, "conj"),
            ("soup", "NOUN", 7, "dobj"),
        ],
        &mut out,
    );
    push(
        2,
        &[
            ("he", "PRON", 2, "nsubj"),
            ("wins", "VERB", 0, "root"),
            (",", "PUNCT", 2, "punct"),
            ("in", "ADP", 8, "discourse"),
            ("other", "ADJ", 4, "fixed"),
            ("words", "NOUN", 4, "fixed"),
            ("he", "PRON", 8, "nsubj"),
            ("rules", "VERB", 2, "conj"),
        ],
        &mut out,
    );
    push(
        3,
        &[
            ("i", "PRON", 2, "nsubj"),
            ("read", "VERB", 0, "root"),
            ("while", "SCONJ", 5, "mark"),
            ("he", "PRON", 5, "nsubj"),
            ("cooks", "VERB", 2, "advcl"),
        ],
        &mut out,
    );

    // filler, with enough repetition to survive a core filter
    let filler: Vec<(usize, Vec<(&str, &str, usize, &str)>)> = vec![
        (10, vec![("the", "DET", 2, "det"), ("dog", "NOUN", 3, "nsubj"), ("barks", "VERB", 0, "root")]),
        (8, vec![("the", "DET", 2, "det"), ("cat", "NOUN", 3, "nsubj"), ("sleeps", "VERB", 0, "root")]),
        (8, vec![("i", "PRON", 2, "nsubj"), ("love", "VERB", 0, "root"), ("you", "PRON", 2, "dobj")]),
        (7, vec![("the", "DET", 2, "det"), ("bird", "NOUN", 3, "nsubj"), ("sings", "VERB", 0, "root")]),
        (7, vec![("she", "PRON", 2, "nsubj"), ("reads", "VERB", 0, "root"), ("a", "DET", 4, "det"), ("book", "NOUN", 2, "dobj")]),
        (7, vec![("we", "PRON", 2, "nsubj"), ("drink", "VERB", 0, "root"), ("water", "NOUN", 2, "dobj")]),
        (6, vec![("he", "PRON", 2, "nsubj"), ("plays", "VERB", 0, "root"), ("soccer", "NOUN", 2, "dobj"), ("with", "ADP", 6, "case"), ("me", "PRON", 2, "nmod")]),
        (6, vec![("the", "DET", 2, "det"), ("dog", "NOUN", 4, "nsubj"), ("is", "AUX", 4, "cop"), ("cute", "ADJ", 0, "root")]),
        (6, vec![("i", "PRON", 2, "nsubj"), ("want", "VERB", 0, "root"), ("to", "PART", 4, "mark"), ("go", "VERB", 2, "xcomp")]),
        (6, vec![("the", "DET", 2, "det"), ("bill", "NOUN", 4, "nsubjpass"), ("is", "AUX", 4, "auxpass"), ("paid", "VERB", 0, "root")]),
        (6, vec![("he", "PRON", 2, "nsubj"), ("walks", "VERB", 0, "root"), ("into", "ADP", 5, "case"), ("the", "DET", 5, "det"), ("room", "NOUN", 2, "nmod")]),
        (6, vec![("you", "PRON", 2, "nsubj"), ("give", "VERB", 0, "root"), ("me", "PRON", 2, "iobj"), ("the", "DET", 5, "det"), ("book", "NOUN", 2, "dobj")]),
        (6, vec![("i", "PRON", 2, "nsubj"), ("want", "VERB", 0, "root"), ("to", "PART", 4, "mark"), ("eat", "VERB", 2, "xcomp"), ("the", "DET", 6, "det"), ("apple", "NOUN", 4, "dobj")]),
        (6, vec![("they", "PRON", 2, "nsubj"), ("build", "VERB", 0, "root"), ("houses", "NOUN", 2, "dobj")]),
        (6, vec![("the", "DET", 2, "det"), ("sun", "NOUN", 3, "nsubj"), ("shines", "VERB", 0, "root")]),
        (6, vec![("the", "DET", 2, "det"), ("child", "NOUN", 3, "nsubj"), ("laughs", "VERB", 0, "root")]),
        (6, vec![("we", "PRON", 2, "nsubj"), ("watch", "VERB", 0, "root"), ("birds", "NOUN", 2, "dobj")]),
        (6, vec![("he", "PRON", 2, "nsubj"), ("kicks", "VERB", 0, "root"), ("the", "DET", 4, "det"), ("ball", "NOUN", 2, "dobj")]),
        (6, vec![("she", "PRON", 2, "nsubj"), ("paints", "VERB", 0, "root"), ("walls", "NOUN", 2, "dobj")]),
        (6, vec![("it", "PRON", 2, "nsubj"), ("rains", "VERB", 0, "root")]),
        (6, vec![("the", "DET", 2, "det"), ("horse", "NOUN", 3, "nsubj"), ("runs", "VERB", 0, "root")]),
        (7, vec![("i", "PRON", 2, "nsubj"), ("sleep", "VERB", 0, "root")]),
        // singletons, so the core filter has something to drop
        (1, vec![("the", "DET", 2, "det"), ("owl", "NOUN", 3, "nsubj"), ("hoots", "VERB", 0, "root")]),
        (1, vec![("the", "DET", 2, "det"), ("fox", "NOUN", 3, "nsubj"), ("yelps", "VERB", 0, "root")]),
    ];
    for (count, rows) in &filler {
        push(*count, rows, &mut out);
    }
    out
}

/// An s-v-o-shaped eventuality used by the pronoun-resolution fixtures.
pub fn svo_eventuality(subject: &str, verb: &str, object: &str) -> Eventuality {
    let mk = |pos: usize, form: &str, upos: &str| EventWord {
        position: pos,
        form: form.to_string(),
        upos: upos.to_string(),
    };
    Eventuality {
        words: vec![
            mk(1, subject, "NOUN"),
            mk(2, verb, "VERB"),
            mk(3, object, "NOUN"),
        ],
        edges: vec![
            EventEdge {
                gov: 1,
                dep: 0,
                relation: "nsubj".to_string(),
            },
            EventEdge {
                gov: 1,
                dep: 2,
                relation: "dobj".to_string(),
            },
        ],
        pattern: PatternCode::SVO,
        frequency: 1,
    }
}

/// An s-be-a-shaped eventuality.
pub fn sba_eventuality(subject: &str, cop: &str, adjective: &str) -> Eventuality {
    let mk = |pos: usize, form: &str, upos: &str| EventWord {
        position: pos,
        form: form.to_string(),
        upos: upos.to_string(),
    };
    Eventuality {
        words: vec![
            mk(1, subject, "NOUN"),
            mk(2, cop, "AUX"),
            mk(3, adjective, "ADJ"),
        ],
        edges: vec![
            EventEdge {
                gov: 2,
                dep: 0,
                relation: "nsubj".to_string(),
            },
            EventEdge {
                gov: 2,
                dep: 1,
                relation: "cop".to_string(),
            },
        ],
        pattern: PatternCode::SBeA,
        frequency: 1,
    }
}

/// The pronoun-support graph: 18 edges backing "the subject of ate is
/// hungry", 1 edge backing the object reading, 7 edges backing "the object
/// of ate is tasty", and a symmetric 2/2 tie on "warm".
pub fn wsc_support_graph() -> KnowledgeGraph {
    let mut g = KnowledgeGraph::new();
    let mut link = |g: &mut KnowledgeGraph, h: &Eventuality, t: &Eventuality| {
        let hk = g.upsert_eventuality(h, 1);
        let tk = g.upsert_eventuality(t, 1);
        g.upsert_relation(&hk, &tk, RelationType::CoOccurrence, 1.0)
            .unwrap();
    };
    for i in 0..18 {
        let w = format!("animal{i:02}");
        link(&mut g, &svo_eventuality(&w, "ate", "worm"), &sba_eventuality(&w, "was", "hungry"));
    }
    link(
        &mut g,
        &svo_eventuality("fish", "ate", "prey00"),
        &sba_eventuality("prey00", "was", "hungry"),
    );
    for i in 0..7 {
        let w = format!("snack{i:02}");
        link(&mut g, &svo_eventuality("fish", "ate", &w), &sba_eventuality(&w, "was", "tasty"));
    }
    for i in 0..2 {
        let w = format!("tiea{i:02}");
        link(&mut g, &svo_eventuality(&w, "ate", "worm"), &sba_eventuality(&w, "was", "warm"));
        let w = format!("tieb{i:02}");
        link(&mut g, &svo_eventuality("fish", "ate", &w), &sba_eventuality(&w, "was", "warm"));
    }
    g
}

/// The two-sentence pronoun question in the JSON Lines input format.
pub fn wsc_question_line(id: &str, predicate: &str, answer: Option<&str>) -> String {
    let answer = answer
        .map(|a| format!(",\"answer\":\"{a}\""))
        .unwrap_or_default();
    format!(
        concat!(
            "{{\"id\":\"{id}\",\"tokens\":[",
            "[\"The\",\"DET\",2,\"det\"],[\"fish\",\"NOUN\",3,\"nsubj\"],[\"ate\",\"VERB\",0,\"root\"],",
            "[\"the\",\"DET\",5,\"det\"],[\"worm\",\"NOUN\",3,\"dobj\"],[\".\",\"PUNCT\",3,\"punct\"],",
            "[\"it\",\"PRON\",9,\"nsubj\"],[\"was\",\"AUX\",9,\"cop\"],[\"{predicate}\",\"ADJ\",3,\"parataxis\"],",
            "[\".\",\"PUNCT\",3,\"punct\"]],\"n1\":2,\"n2\":5,\"p\":7{answer}}}"
        ),
        id = id,
        predicate = predicate,
        answer = answer
    )
}

/// A random multi-relation graph over synthetic single-word eventualities,
/// returned both as a raw edge list (for oracles) and a built graph.
pub struct RandomGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, RelationType, usize, f64)>,
    pub graph: KnowledgeGraph,
}

pub fn word_eventuality(name: &str) -> Eventuality {
    Eventuality {
        words: vec![EventWord {
            position: 1,
            form: name.to_string(),
            upos: "NOUN".to_string(),
        }],
        edges: vec![],
        pattern: PatternCode::SV,
        frequency: 1,
    }
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, max_rel_types: usize) -> RandomGraph {
    let n = rng.gen_range(2..=max_nodes);
    let n_rel = rng.gen_range(1..=max_rel_types);
    let rel_types: Vec<RelationType> = RelationType::ALL
        .choose_multiple(rng, n_rel)
        .copied()
        .collect();
    let mut graph = KnowledgeGraph::new();
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let name = format!("n{i:02}");
        graph.upsert_eventuality(&word_eventuality(&name), 1);
        nodes.push(word_eventuality(&name).key());
    }
    let mut edges = Vec::new();
    let m = rng.gen_range(1..=(n * 3));
    for _ in 0..m {
        let h = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        let r = *rel_types.choose(rng).unwrap();
        let w = rng.gen_range(1..=9) as f64;
        graph.upsert_relation(&nodes[h], &nodes[t], r, w).unwrap();
        edges.push((h, r, t, w));
    }
    RandomGraph { nodes, edges, graph }
}

fn weight_of(edges: &[(usize, RelationType, usize, f64)], h: usize, r: RelationType, t: usize) -> f64 {
    edges
        .iter()
        .filter(|(eh, er, et, _)| *eh == h && *er == r && *et == t)
        .map(|(_, _, _, w)| w)
        .sum()
}

/// Brute-force P(t | h, r) from the raw edge list.
pub fn oracle_p_tail_one(
    edges: &[(usize, RelationType, usize, f64)],
    n: usize,
    h: usize,
    r: RelationType,
    t: usize,
) -> f64 {
    let denom: f64 = (0..n).map(|t2| weight_of(edges, h, r, t2)).sum();
    if denom <= 0.0 {
        return 0.0;
    }
    weight_of(edges, h, r, t) / denom
}

/// Brute-force two-hop P(t | h, r1, r2), enumerating every intermediate.
pub fn oracle_p_tail_two(
    edges: &[(usize, RelationType, usize, f64)],
    n: usize,
    h: usize,
    r1: RelationType,
    r2: RelationType,
    t: usize,
) -> f64 {
    (0..n)
        .map(|m| {
            oracle_p_tail_one(edges, n, h, r1, m) * oracle_p_tail_one(edges, n, m, r2, t)
        })
        .sum()
}

/// Brute-force P(r | h, t).
pub fn oracle_p_rel_one(
    edges: &[(usize, RelationType, usize, f64)],
    h: usize,
    r: RelationType,
    t: usize,
    include_co_occurrence: bool,
) -> f64 {
    let admitted = |r2: RelationType| include_co_occurrence || r2 != RelationType::CoOccurrence;
    if !admitted(r) {
        return 0.0;
    }
    let denom: f64 = RelationType::ALL
        .into_iter()
        .filter(|r2| admitted(*r2))
        .map(|r2| weight_of(edges, h, r2, t))
        .sum();
    if denom <= 0.0 {
        return 0.0;
    }
    weight_of(edges, h, r, t) / denom
}

/// Brute-force P(r | h).
pub fn oracle_p_rel_given_head(
    edges: &[(usize, RelationType, usize, f64)],
    n: usize,
    h: usize,
    r: RelationType,
    include_co_occurrence: bool,
) -> f64 {
    let admitted = |r2: RelationType| include_co_occurrence || r2 != RelationType::CoOccurrence;
    if !admitted(r) {
        return 0.0;
    }
    let total = |r2: RelationType| -> f64 { (0..n).map(|t| weight_of(edges, h, r2, t)).sum() };
    let denom: f64 = RelationType::ALL
        .into_iter()
        .filter(|r2| admitted(*r2))
        .map(total)
        .sum();
    if denom <= 0.0 {
        return 0.0;
    }
    total(r) / denom
}

/// Brute-force P(r1, r2 | h, t) via full path enumeration.
pub fn oracle_p_rel_two(
    edges: &[(usize, RelationType, usize, f64)],
    n: usize,
    h: usize,
    t: usize,
    r1: RelationType,
    r2: RelationType,
    include_co_occurrence: bool,
) -> f64 {
    let p_r1 = oracle_p_rel_given_head(edges, n, h, r1, include_co_occurrence);
    (0..n)
        .map(|m| {
            p_r1 * oracle_p_tail_one(edges, n, h, r1, m)
                * oracle_p_rel_one(edges, m, r2, t, include_co_occurrence)
        })
        .sum()
}

/// The planted-signal corpus: seed-labeled signal instances, unlabeled
/// planted twins with known ground truth, and pure-noise padding.
pub struct PlantedCorpus {
    pub pool: Vec<TrainingInstance>,
    pub seeds: Vec<TrainingInstance>,
    /// (instance id, true type) for the planted, unlabeled instances.
    pub planted_truth: Vec<(String, RelationType)>,
}

pub fn synthetic_instance(
    id: &str,
    e1_words: &[&str],
    e2_words: &[&str],
    filler: &[&str],
    label: Option<RelationType>,
) -> TrainingInstance {
    let mut sentence: Vec<String> = Vec::new();
    sentence.extend(e1_words.iter().map(|s| s.to_string()));
    sentence.extend(filler.iter().map(|s| s.to_string()));
    sentence.extend(e2_words.iter().map(|s| s.to_string()));
    let w1: Vec<usize> = (1..=e1_words.len()).collect();
    let w2_start = e1_words.len() + filler.len() + 1;
    let w2: Vec<usize> = (w2_start..w2_start + e2_words.len()).collect();
    let n = sentence.len();
    TrainingInstance {
        e1_key: format!("{}|", e1_words.join(" ")),
        e2_key: format!("{}|", e2_words.join(" ")),
        sentence_id: id.to_string(),
        gap: (e1_words.len() + 1, w2_start - 1),
        labels: label.into_iter().collect(),
        sentence,
        heads: vec![0; n],
        w1,
        w2,
    }
}

pub fn planted_corpus(seed: u64) -> PlantedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let filler_vocab = [
        "kite", "lamp", "moss", "pond", "reed", "sand", "tarn", "vale", "wick", "yurt",
    ];
    let subjects = ["i", "he", "she", "we", "they", "you"];
    let mut filler = |rng: &mut ChaCha8Rng| -> Vec<&'static str> {
        (0..3).map(|_| *filler_vocab.choose(rng).unwrap()).collect()
    };

    let mut pool = Vec::new();
    let mut seeds = Vec::new();
    let mut planted_truth = Vec::new();

    // 50 Result seeds + 50 Precedence seeds (Contingency and Temporal).
    for i in 0..50 {
        let s1 = subjects[i % subjects.len()];
        let f = filler(&mut rng);
        let inst = synthetic_instance(
            &format!("seed-r{i}"),
            &[s1, "grumble"],
            &[s1, "nibble"],
            &f,
            Some(RelationType::Result),
        );
        seeds.push(inst.clone());
        pool.push(inst);
        let s2 = subjects[(i + 1) % subjects.len()];
        let f = filler(&mut rng);
        let inst = synthetic_instance(
            &format!("seed-p{i}"),
            &[s2, "whistle"],
            &[s2, "march"],
            &f,
            Some(RelationType::Precedence),
        );
        seeds.push(inst.clone());
        pool.push(inst);
    }
    // 100 planted: the same signals without labels.
    for i in 0..50 {
        let s = subjects[(i + 2) % subjects.len()];
        let f = filler(&mut rng);
        let id = format!("planted-r{i}");
        pool.push(synthetic_instance(&id, &[s, "grumble"], &[s, "nibble"], &f, None));
        planted_truth.push((id, RelationType::Result));
        let f = filler(&mut rng);
        let id = format!("planted-p{i}");
        pool.push(synthetic_instance(&id, &[s, "whistle"], &[s, "march"], &f, None));
        planted_truth.push((id, RelationType::Precedence));
    }
    // 200 pure-noise unlabeled instances.
    for i in 0..200 {
        let s = subjects[i % subjects.len()];
        let a = filler(&mut rng);
        let b = filler(&mut rng);
        let f = filler(&mut rng);
        pool.push(synthetic_instance(
            &format!("noise{i}"),
            &[s, a[0]],
            &[s, b[0]],
            &f,
            None,
        ));
    }
    // truncate to exactly 100 seeds + 100 planted by construction
    assert_eq!(seeds.len(), 100);
    assert_eq!(planted_truth.len(), 100);
    PlantedCorpus {
        pool,
        seeds,
        planted_truth,
    }
}
