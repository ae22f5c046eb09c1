//! Optional per-essay linguistic layers produced by external preprocessing.
//!
//! One JSON file per essay. Every field is optional:
//!
//! ```json
//! {
//!   "tokens": [{"start": 0, "end": 5, "pos": "NNP", "lemma": "hello"}],
//!   "sentences": [[0, 42]],
//!   "constituency": ["(ROOT (S ...))"],
//!   "dependencies": [{"governor": 1, "dependent": 0, "relation": "nsubj"}],
//!   "discourse": [{"sense": "Contrast", "explicit": false, "arg1": [0, 10], "arg2": [11, 30]}],
//!   "sentiment": [[0.1, 0.2, 0.4, 0.2, 0.1]]
//! }
//! ```
//!
//! Offsets are character offsets into the essay text. Token indices in
//! `dependencies` refer to the sidecar `tokens` list. `constituency` and
//! `sentiment` hold one entry per sidecar sentence, or per document sentence
//! when the sidecar carries no sentence layer.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::segment::{self, RawToken};
use super::tree::ParseTree;
use super::{Document, Span};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SidecarToken {
    pub start: usize,
    pub end: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyEdge {
    pub governor: usize,
    pub dependent: usize,
    pub relation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscourseRelation {
    pub sense: String,
    pub explicit: bool,
    #[serde(with = "span_pair")]
    pub arg1: Span,
    #[serde(with = "span_pair")]
    pub arg2: Span,
}

mod span_pair {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Span;

    pub fn serialize<S: Serializer>(span: &Span, s: S) -> Result<S::Ok, S::Error> {
        [span.start, span.end].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Span, D::Error> {
        let [start, end] = <[usize; 2]>::deserialize(d)?;
        Ok(Span::new(start, end))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(default)]
    pub tokens: Vec<SidecarToken>,
    #[serde(default)]
    pub sentences: Vec<[usize; 2]>,
    #[serde(default)]
    pub constituency: Vec<String>,
    #[serde(default)]
    pub dependencies: Vec<DependencyEdge>,
    #[serde(default)]
    pub discourse: Vec<DiscourseRelation>,
    #[serde(default)]
    pub sentiment: Vec<[f64; 5]>,
}

impl Sidecar {
    pub fn from_json(json: &str) -> Result<Sidecar> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn load_optional(path: &Path) -> Result<Option<Sidecar>> {
        if !path.exists() {
            return Ok(None);
        }
        let json = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Sidecar::from_json(&json).map(Some)
    }
}

/// Linguistic layers aligned to a document's tokens and sentences.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Layers {
    pub pos: Option<Vec<String>>,
    pub lemmas: Option<Vec<String>>,
    /// One tree per document sentence.
    pub trees: Option<Vec<ParseTree>>,
    /// Edges over essay-wide token indices.
    pub dependencies: Option<Vec<DependencyEdge>>,
    pub discourse: Option<Vec<DiscourseRelation>>,
    /// Five sentiment class scores per document sentence.
    pub sentiment: Option<Vec<[f64; 5]>>,
}

/// Re-segments `doc` with the sidecar tokens (and sentences, when present).
pub(crate) fn apply_segmentation(doc: &mut Document, sc: &Sidecar, para_spans: &[Span], n_chars: usize) -> Result<()> {
    for (i, t) in sc.tokens.iter().enumerate() {
        if t.start >= t.end || t.end > n_chars {
            return Err(Error::Validity(format!("sidecar token {i} has invalid offsets {}..{}", t.start, t.end)));
        }
    }
    for para in para_spans {
        let tokens: Vec<RawToken> = sc
            .tokens
            .iter()
            .filter(|t| para.contains(&Span::new(t.start, t.end)))
            .map(|t| RawToken { surface: doc.slice(Span::new(t.start, t.end)).to_string(), start: t.start, end: t.end })
            .collect();
        let sentences = if sc.sentences.is_empty() {
            segment::split_sentences(&tokens)
        } else {
            let mut ranges: Vec<std::ops::Range<usize>> = Vec::new();
            let mut current: Option<usize> = None;
            for (k, t) in tokens.iter().enumerate() {
                let s = sc.sentences.iter().position(|&[a, b]| a <= t.start && t.start < b);
                if s != current || ranges.is_empty() {
                    ranges.push(k..k + 1);
                    current = s;
                } else if let Some(last) = ranges.last_mut() {
                    last.end = k + 1;
                }
            }
            ranges
        };
        doc.push_paragraph(*para, &tokens, &sentences);
    }
    Ok(())
}

/// Aligns sidecar layers to the (already segmented) document.
pub(crate) fn build_layers(doc: &Document, sc: &Sidecar) -> Result<Layers> {
    let mut layers = Layers::default();
    let by_offset: HashMap<(usize, usize), usize> =
        doc.tokens.iter().enumerate().map(|(i, t)| ((t.char_start, t.char_end), i)).collect();
    let token_map: Vec<Option<usize>> = sc.tokens.iter().map(|t| by_offset.get(&(t.start, t.end)).copied()).collect();

    if !sc.tokens.is_empty() {
        let mut pos = vec![None; doc.tokens.len()];
        let mut lemmas = vec![None; doc.tokens.len()];
        for (t, m) in sc.tokens.iter().zip(&token_map) {
            if let Some(i) = *m {
                pos[i] = t.pos.clone();
                lemmas[i] = t.lemma.clone();
            }
        }
        layers.pos = pos.into_iter().collect();
        layers.lemmas = lemmas.into_iter().collect();
    }

    // Map sidecar sentence index -> document sentence index.
    let sentence_map: Vec<Option<usize>> = if sc.sentences.is_empty() {
        (0..doc.sentences.len()).map(Some).collect()
    } else {
        sc.sentences
            .iter()
            .map(|&[a, b]| doc.sentences.iter().position(|s| s.span.start >= a && s.span.end <= b))
            .collect()
    };

    if !sc.constituency.is_empty() {
        let mut trees: Vec<Option<ParseTree>> = vec![None; doc.sentences.len()];
        for (k, bracketed) in sc.constituency.iter().enumerate() {
            let Some(Some(s)) = sentence_map.get(k) else { continue };
            let tree = ParseTree::parse(bracketed)?;
            let n = doc.sentences[*s].tokens.len();
            if tree.len() != n {
                return Err(Error::Validity(format!(
                    "{}: tree {k} has {} leaves but sentence has {n} tokens",
                    doc.essay_id,
                    tree.len()
                )));
            }
            trees[*s] = Some(tree);
        }
        layers.trees = trees.into_iter().collect();
        if layers.trees.is_none() {
            log::warn!("{}: constituency layer does not cover every sentence; ignored", doc.essay_id);
        }
    }
    if layers.pos.is_none() {
        if let Some(trees) = &layers.trees {
            let pos: Option<Vec<String>> = trees
                .iter()
                .flat_map(|t| (0..t.len()).map(move |i| t.pos(i).map(str::to_string)))
                .collect();
            layers.pos = pos;
        }
    }

    if !sc.dependencies.is_empty() {
        let edges = sc
            .dependencies
            .iter()
            .filter_map(|e| {
                let g = token_map.get(e.governor).copied().flatten()?;
                let d = token_map.get(e.dependent).copied().flatten()?;
                Some(DependencyEdge { governor: g, dependent: d, relation: e.relation.clone() })
            })
            .collect();
        layers.dependencies = Some(edges);
    }
    if !sc.discourse.is_empty() {
        layers.discourse = Some(sc.discourse.clone());
    }
    if !sc.sentiment.is_empty() {
        let mut scores = vec![None; doc.sentences.len()];
        for (k, s) in sc.sentiment.iter().enumerate() {
            if let Some(Some(d)) = sentence_map.get(k) {
                scores[*d] = Some(*s);
            }
        }
        layers.sentiment = scores.into_iter().collect();
    }
    Ok(layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_tokens_and_trees_align() {
        let text = "Title\n\nI agree. Cats purr.\n";
        let json = r#"{
            "tokens": [
                {"start": 7, "end": 8, "pos": "PRP", "lemma": "I"},
                {"start": 9, "end": 14, "pos": "VBP", "lemma": "agree"},
                {"start": 14, "end": 15, "pos": ".", "lemma": "."},
                {"start": 16, "end": 20, "pos": "NNS", "lemma": "cat"},
                {"start": 21, "end": 25, "pos": "VBP", "lemma": "purr"},
                {"start": 25, "end": 26, "pos": ".", "lemma": "."}
            ],
            "constituency": [
                "(ROOT (S (NP (PRP I)) (VP (VBP agree)) (. .)))",
                "(ROOT (S (NP (NNS Cats)) (VP (VBP purr)) (. .)))"
            ],
            "sentiment": [[0,0,1,0,0],[0,0,0,1,0]]
        }"#;
        let sc = Sidecar::from_json(json).unwrap();
        let doc = Document::new("e", text, Some(&sc)).unwrap();
        assert_eq!(doc.tokens.len(), 6);
        assert_eq!(doc.sentences.len(), 2);
        assert_eq!(doc.lemma(3), "cat");
        assert_eq!(doc.pos(4), Some("VBP"));
        assert_eq!(doc.layers.trees.as_ref().unwrap().len(), 2);
        assert_eq!(doc.layers.sentiment.as_ref().unwrap()[1][3], 1.0);
    }

    #[test]
    fn tree_leaf_mismatch_is_rejected() {
        let text = "Title\n\nI agree.\n";
        let sc = Sidecar { constituency: vec!["(ROOT (S (NP (PRP I)) (. .)))".into()], ..Default::default() };
        assert!(Document::new("e", text, Some(&sc)).is_err());
    }
}
