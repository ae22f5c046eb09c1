//! Feature extraction for the four parsing stages. Feature names have the
//! form `group:detail`; groups can be switched off by name.
//!
//! Groups: `struct`, `genre` (essay-layout features such as introduction or
//! conclusion membership), `syn`, `lexsyn`, `prob`, `lex`, `dep`, `ind`,
//! `ctx`, `disc`, `emb`, `pmi`, `shno`, `senti`.

mod component;
mod lexicon;
mod pair;
mod resources;
mod tables;
mod token;
mod vector;

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, ParseTree, Span};

pub use lexicon::{IndicatorLexicon, IndicatorType, BACKWARD, FIRST_PERSON, FORWARD, REBUTTAL, THESIS};
pub use resources::{Embeddings, Polarity, SubjectivityLexicon};
pub use tables::{
    context_key, estimate_argb_probabilities, estimate_pmi, estimate_type_probabilities, most_frequent, ContextCounts,
    Direction, PmiTable, ProbabilityTable, MAX_CONTEXT,
};
pub use vector::FeatureVector;

/// Every feature group name.
pub const GROUPS: [&str; 14] =
    ["struct", "genre", "syn", "lexsyn", "prob", "lex", "dep", "ind", "ctx", "disc", "emb", "pmi", "shno", "senti"];

pub const DEPENDENCY_CUTOFF: usize = 2000;
pub const PAIR_UNIGRAM_CUTOFF: usize = 500;
pub const PAIR_RULE_CUTOFF: usize = 500;

/// Statistics and frequency cutoffs fitted on training documents only.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureTables {
    pub argb: ProbabilityTable,
    pub types: ProbabilityTable,
    pub pmi: PmiTable,
    pub dependency_tuples: BTreeSet<String>,
    pub pair_unigrams: BTreeSet<String>,
    pub pair_rules: BTreeSet<String>,
}

impl FeatureTables {
    pub fn fit(train: &[Document]) -> FeatureTables {
        warn_missing_layers(train);
        let mut deps: HashMap<String, usize> = HashMap::new();
        let mut unigrams: HashMap<String, usize> = HashMap::new();
        let mut rules: HashMap<String, usize> = HashMap::new();
        for doc in train {
            for c in &doc.components {
                let ext = extended_range(doc, c.span, doc.preceding_tokens(c));
                for i in ext.clone() {
                    *unigrams.entry(doc.lemma(i)).or_default() += 1;
                }
                for t in dependency_tuples(doc, ext) {
                    *deps.entry(t).or_default() += 1;
                }
                for r in production_rules(doc, doc.token_range(c.span)) {
                    *rules.entry(r).or_default() += 1;
                }
            }
        }
        FeatureTables {
            argb: estimate_argb_probabilities(train),
            types: estimate_type_probabilities(train),
            pmi: estimate_pmi(train),
            dependency_tuples: most_frequent(&deps, DEPENDENCY_CUTOFF),
            pair_unigrams: most_frequent(&unigrams, PAIR_UNIGRAM_CUTOFF),
            pair_rules: most_frequent(&rules, PAIR_RULE_CUTOFF),
        }
    }
}

/// Everything feature extraction reads besides the document itself.
#[derive(Clone, Copy, Debug)]
pub struct Extractor<'a> {
    pub tables: &'a FeatureTables,
    pub lexicon: &'a IndicatorLexicon,
    pub embeddings: Option<&'a Embeddings>,
    pub subjectivity: Option<&'a SubjectivityLexicon>,
}

impl<'a> Extractor<'a> {
    pub fn new(tables: &'a FeatureTables, lexicon: &'a IndicatorLexicon) -> Self {
        Extractor { tables, lexicon, embeddings: None, subjectivity: None }
    }
}

/// Logs, once per batch, which optional layers are absent and which feature
/// groups lose their input as a result.
pub fn warn_missing_layers(docs: &[Document]) {
    type LayerCheck = (&'static str, fn(&Document) -> bool, &'static str);
    let checks: [LayerCheck; 5] = [
        ("part-of-speech", |d| d.layers.pos.is_some(), "syn (POS), shno"),
        ("constituency", |d| d.layers.trees.is_some(), "syn (tree), lexsyn, genre (shared phrases)"),
        ("dependency", |d| d.layers.dependencies.is_some(), "dep"),
        ("discourse", |d| d.layers.discourse.is_some(), "disc"),
        ("sentiment", |d| d.layers.sentiment.is_some(), "senti (scores)"),
    ];
    for (layer, present, groups) in checks {
        let missing = docs.iter().filter(|d| !present(d)).count();
        if missing > 0 {
            log::warn!("{missing} of {} documents lack the {layer} layer; features off there: {groups}", docs.len());
        }
    }
}

/// ln(1 + x), used for unbounded counts and absolute positions.
pub(crate) fn scaled(x: usize) -> f64 {
    (x as f64).ln_1p()
}

pub(crate) fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Component tokens together with their preceding tokens.
pub(crate) fn extended_range(doc: &Document, span: Span, preceding: Range<usize>) -> Range<usize> {
    let r = doc.token_range(span);
    if preceding.is_empty() {
        r
    } else {
        preceding.start.min(r.start)..r.end
    }
}

pub(crate) fn surfaces(doc: &Document, range: Range<usize>) -> Vec<&str> {
    doc.tokens[range].iter().map(|t| t.surface.as_str()).collect()
}

pub(crate) fn tree(doc: &Document, sentence: usize) -> Option<&ParseTree> {
    doc.layers.trees.as_ref().and_then(|t| t.get(sentence))
}

/// Sentence-local pieces of an essay-wide token range, one per sentence.
pub(crate) fn per_sentence(doc: &Document, range: Range<usize>) -> Vec<(usize, Range<usize>)> {
    let mut out: Vec<(usize, Range<usize>)> = Vec::new();
    for i in range {
        let s = doc.tokens[i].sent_index;
        let local = i - doc.sentences[s].tokens.start;
        match out.last_mut() {
            Some((last, r)) if *last == s => r.end = local + 1,
            _ => out.push((s, local..local + 1)),
        }
    }
    out
}

pub(crate) fn production_rules(doc: &Document, range: Range<usize>) -> Vec<String> {
    per_sentence(doc, range)
        .into_iter()
        .filter_map(|(s, r)| tree(doc, s).map(|t| t.production_rules(r)))
        .flatten()
        .collect()
}

/// Lemmatized `governor_dependent` pairs of edges inside `range`.
pub(crate) fn dependency_tuples(doc: &Document, range: Range<usize>) -> Vec<String> {
    let Some(edges) = &doc.layers.dependencies else { return Vec::new() };
    edges
        .iter()
        .filter(|e| range.contains(&e.governor) && range.contains(&e.dependent))
        .map(|e| format!("{}_{}", doc.lemma(e.governor), doc.lemma(e.dependent)))
        .collect()
}

/// `Sense_imp|exp_Arg1|Arg2` for each discourse argument overlapping `span`.
pub(crate) fn discourse_triples(doc: &Document, span: Span) -> Vec<String> {
    let Some(rels) = &doc.layers.discourse else { return Vec::new() };
    let mut out = Vec::new();
    for r in rels {
        let kind = if r.explicit { "exp" } else { "imp" };
        for (arg, name) in [(r.arg1, "Arg1"), (r.arg2, "Arg2")] {
            if arg.overlaps(&span) {
                out.push(format!("{}_{kind}_{name}", r.sense));
            }
        }
    }
    out
}

/// Relative frequency of each POS tag in `range`.
pub(crate) fn pos_distribution(doc: &Document, range: Range<usize>, prefix: &str, out: &mut FeatureVector) {
    if doc.layers.pos.is_none() || range.is_empty() {
        return;
    }
    let n = range.len() as f64;
    for i in range {
        if let Some(p) = doc.pos(i) {
            out.add(format!("{prefix}{p}"), 1.0 / n);
        }
    }
}

pub(crate) fn embedding_sum(doc: &Document, range: Range<usize>, emb: Option<&Embeddings>, out: &mut FeatureVector) {
    let Some(emb) = emb else { return };
    let mut sum = vec![0.0; emb.dim];
    for t in &doc.tokens[range] {
        if let Some(v) = emb.get(&t.surface) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
        }
    }
    for (d, v) in sum.into_iter().enumerate() {
        out.set(format!("emb:{d:04}"), v);
    }
}

/// Position of a component among the components of its paragraph:
/// (paragraph, index in paragraph, number of components in paragraph).
pub(crate) fn paragraph_position(doc: &Document, ci: usize) -> Option<(usize, usize, usize)> {
    let p = doc.paragraph_of(doc.components[ci].span)?;
    let group = doc.components_by_paragraph().swap_remove(p);
    let k = group.iter().position(|&x| x == ci)?;
    Some((p, k, group.len()))
}

pub(crate) fn indicator_flags(lex: &IndicatorLexicon, words: &[&str], prefix: &str, suffix: &str, out: &mut FeatureVector) {
    for (t, found) in IndicatorType::ALL.iter().zip(lex.types_in(words)) {
        if found {
            out.flag(format!("{prefix}{}{suffix}", t.as_str()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_brat_with_layers, Sidecar};

    #[test]
    fn cutoffs_come_from_training_documents_only() {
        let text = "T\n\nThe cat sat. The dog ran.\n";
        let ann = "T1\tClaim 3 14\tThe cat sat\n";
        let doc = parse_brat_with_layers("e", text, ann, None).unwrap();
        let t = FeatureTables::fit(&[doc]);
        let expected: BTreeSet<String> = ["the", "cat", "sat"].iter().map(|s| s.to_string()).collect();
        assert_eq!(t.pair_unigrams, expected);
        assert!(t.dependency_tuples.is_empty());
    }

    #[test]
    fn discourse_triples_name_sense_kind_and_argument() {
        let text = "T\n\nIt rains but we go.\n";
        let sc: Sidecar = Sidecar::from_json(
            r#"{"discourse": [{"sense": "Contrast", "explicit": false, "arg1": [3, 11], "arg2": [16, 21]}]}"#,
        )
        .unwrap();
        let doc = parse_brat_with_layers("e", text, "", Some(&sc)).unwrap();
        assert_eq!(discourse_triples(&doc, Span::new(3, 8)), vec!["Contrast_imp_Arg1".to_string()]);
        assert!(discourse_triples(&doc, Span::new(12, 15)).is_empty());
    }
}
