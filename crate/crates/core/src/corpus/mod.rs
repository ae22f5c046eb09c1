//! Document object model for brat-annotated persuasive essays.
//!
//! A [`Document`] owns the raw essay text, its paragraph / sentence / token
//! segmentation, the argument components and relations, and any optional
//! linguistic layers loaded from a sidecar file. Offsets are character
//! offsets (Unicode scalar values) into the essay text, matching brat.

mod brat;
mod iob;
mod segment;
mod sidecar;
mod split;
mod stats;
mod tree;
mod validate;

use std::fmt;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use brat::{parse_brat, parse_brat_with_layers, to_brat};
pub use iob::{decode_iob, encode_iob, IobLabel, TokenSpan};
pub use segment::{segment_paragraph, split_sentences, tokenize, RawToken};
pub use sidecar::{DependencyEdge, DiscourseRelation, Layers, Sidecar, SidecarToken};
pub use split::{load_split, parse_split, Partition, SplitSpec, SplitSet};
pub use stats::{corpus_stats, CorpusStats, StatRow, STAT_KEYS};
pub use tree::{ParseTree, TreeNode};
pub use validate::{validate_attributes, validate_document, Violation, ViolationKind};

/// Half-open character interval `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start, self.end)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub char_start: usize,
    pub char_end: usize,
    pub sent_index: usize,
    pub para_index: usize,
}

impl Token {
    pub fn span(&self) -> Span {
        Span::new(self.char_start, self.char_end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentType {
    MajorClaim,
    Claim,
    Premise,
}

impl ComponentType {
    pub const ALL: [ComponentType; 3] =
        [ComponentType::MajorClaim, ComponentType::Claim, ComponentType::Premise];

    pub fn as_str(&self) -> &'static str {
        match self {
            ComponentType::MajorClaim => "MajorClaim",
            ComponentType::Claim => "Claim",
            ComponentType::Premise => "Premise",
        }
    }
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComponentType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "MajorClaim" => Ok(ComponentType::MajorClaim),
            "Claim" => Ok(ComponentType::Claim),
            "Premise" => Ok(ComponentType::Premise),
            other => Err(Error::Validity(format!("unknown component type `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stance {
    For,
    Against,
}

impl Stance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stance::For => "For",
            Stance::Against => "Against",
        }
    }
}

impl FromStr for Stance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "For" => Ok(Stance::For),
            "Against" => Ok(Stance::Against),
            other => Err(Error::Validity(format!("unknown stance `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationType {
    Support,
    Attack,
}

impl RelationType {
    /// The brat relation label (`supports` / `attacks`).
    pub fn brat_label(&self) -> &'static str {
        match self {
            RelationType::Support => "supports",
            RelationType::Attack => "attacks",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgumentComponent {
    pub id: String,
    pub ctype: ComponentType,
    pub span: Span,
    pub stance: Option<Stance>,
    /// Tokens before the component inside its sentence (after any earlier
    /// component of the same sentence). `None` when empty.
    pub preceding_span: Option<Span>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgumentativeRelation {
    pub id: String,
    pub source: String,
    pub target: String,
    pub rtype: RelationType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub span: Span,
    /// Essay-wide token indices.
    pub tokens: Range<usize>,
    pub para_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub span: Span,
    /// Essay-wide sentence indices.
    pub sentences: Range<usize>,
}

/// Coarse position of a paragraph inside the essay.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParagraphRole {
    Introduction,
    Body,
    Conclusion,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Document {
    pub essay_id: String,
    pub text: String,
    /// Prompt / title line, excluded from paragraphs and the token sequence.
    pub title: Option<Span>,
    pub tokens: Vec<Token>,
    pub sentences: Vec<Sentence>,
    pub paragraphs: Vec<Paragraph>,
    pub components: Vec<ArgumentComponent>,
    pub relations: Vec<ArgumentativeRelation>,
    #[serde(default)]
    pub layers: Layers,
    #[serde(skip)]
    char_bytes: Vec<usize>,
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.essay_id == other.essay_id
            && self.text == other.text
            && self.title == other.title
            && self.tokens == other.tokens
            && self.sentences == other.sentences
            && self.paragraphs == other.paragraphs
            && self.components == other.components
            && self.relations == other.relations
    }
}

impl Document {
    /// Builds a segmented document without annotations. Sidecar tokens and
    /// sentences replace the built-in segmentation when present.
    pub fn new(essay_id: &str, text: &str, sidecar: Option<&Sidecar>) -> Result<Self> {
        let char_bytes = char_byte_table(text);
        let n_chars = char_bytes.len() - 1;
        let (title, para_spans) = segment::paragraph_spans(text);
        let mut doc = Document {
            essay_id: essay_id.to_string(),
            text: text.to_string(),
            title,
            tokens: Vec::new(),
            sentences: Vec::new(),
            paragraphs: Vec::new(),
            components: Vec::new(),
            relations: Vec::new(),
            layers: Layers::default(),
            char_bytes,
        };
        match sidecar.filter(|s| !s.tokens.is_empty()) {
            Some(sc) => sidecar::apply_segmentation(&mut doc, sc, &para_spans, n_chars)?,
            None => {
                for span in para_spans {
                    let raw = segment::tokenize(doc.slice(span));
                    let shifted: Vec<RawToken> = raw
                        .into_iter()
                        .map(|t| RawToken { start: t.start + span.start, end: t.end + span.start, ..t })
                        .collect();
                    doc.push_paragraph(span, &shifted, &segment::split_sentences(&shifted));
                }
            }
        }
        if let Some(sc) = sidecar {
            doc.layers = sidecar::build_layers(&doc, sc)?;
        }
        Ok(doc)
    }

    pub(crate) fn push_paragraph(&mut self, span: Span, tokens: &[RawToken], sentences: &[Range<usize>]) {
        let para_index = self.paragraphs.len();
        let sent_begin = self.sentences.len();
        for range in sentences {
            if range.is_empty() {
                continue;
            }
            let sent_index = self.sentences.len();
            let tok_begin = self.tokens.len();
            for t in &tokens[range.clone()] {
                self.tokens.push(Token {
                    surface: t.surface.clone(),
                    char_start: t.start,
                    char_end: t.end,
                    sent_index,
                    para_index,
                });
            }
            let first = &tokens[range.start];
            let last = &tokens[range.end - 1];
            self.sentences.push(Sentence {
                span: Span::new(first.start, last.end),
                tokens: tok_begin..self.tokens.len(),
                para_index,
            });
        }
        self.paragraphs.push(Paragraph { span, sentences: sent_begin..self.sentences.len() });
    }

    /// Number of characters (Unicode scalar values) in the essay text.
    pub fn char_len(&self) -> usize {
        self.char_bytes.len().saturating_sub(1)
    }

    /// Text covered by a character span.
    pub fn slice(&self, span: Span) -> &str {
        let start = self.char_bytes[span.start.min(self.char_len())];
        let end = self.char_bytes[span.end.min(self.char_len())];
        &self.text[start..end]
    }

    /// Rebuilds the character index, which serialization skips. Call after
    /// deserializing a document.
    pub fn restore_char_table(&mut self) {
        self.char_bytes = char_byte_table(&self.text);
    }

    pub fn component(&self, id: &str) -> Option<&ArgumentComponent> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn component_index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// Tokens of sentence `s`.
    pub fn sentence_tokens(&self, s: usize) -> &[Token] {
        &self.tokens[self.sentences[s].tokens.clone()]
    }

    /// Sentences of paragraph `p`, each as a token slice.
    pub fn paragraph_sentences(&self, p: usize) -> Vec<&[Token]> {
        self.paragraphs[p].sentences.clone().map(|s| self.sentence_tokens(s)).collect()
    }

    /// Essay-wide token range of paragraph `p`.
    pub fn paragraph_token_range(&self, p: usize) -> Range<usize> {
        let sents = &self.paragraphs[p].sentences;
        if sents.is_empty() {
            return 0..0;
        }
        self.sentences[sents.start].tokens.start..self.sentences[sents.end - 1].tokens.end
    }

    pub fn paragraph_role(&self, p: usize) -> ParagraphRole {
        if p == 0 {
            ParagraphRole::Introduction
        } else if p + 1 == self.paragraphs.len() {
            ParagraphRole::Conclusion
        } else {
            ParagraphRole::Body
        }
    }

    /// Paragraph containing a character span, if it lies inside exactly one.
    pub fn paragraph_of(&self, span: Span) -> Option<usize> {
        self.paragraphs.iter().position(|p| p.span.contains(&span))
    }

    /// Tokens overlapping a character span, as an essay-wide index range.
    pub fn token_range(&self, span: Span) -> Range<usize> {
        let start = self.tokens.partition_point(|t| t.char_end <= span.start);
        let end = self.tokens.partition_point(|t| t.char_start < span.end);
        start..end.max(start)
    }

    /// Component indices grouped by paragraph, each group ordered by offset.
    pub fn components_by_paragraph(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.paragraphs.len()];
        for (i, c) in self.components.iter().enumerate() {
            if let Some(p) = self.paragraph_of(c.span) {
                groups[p].push(i);
            }
        }
        for g in &mut groups {
            g.sort_by_key(|&i| self.components[i].span.start);
        }
        groups
    }

    /// Index of the sentence covering the first token of `span`.
    pub fn sentence_of(&self, span: Span) -> Option<usize> {
        let range = self.token_range(span);
        self.tokens.get(range.start).map(|t| t.sent_index)
    }

    /// Recomputes `preceding_span` of every component from sentence boundaries.
    pub fn assign_preceding_spans(&mut self) {
        let mut order: Vec<usize> = (0..self.components.len()).collect();
        order.sort_by_key(|&i| self.components[i].span.start);
        let mut updates = Vec::with_capacity(order.len());
        for (k, &i) in order.iter().enumerate() {
            let span = self.components[i].span;
            let Some(s) = self.sentence_of(span) else {
                updates.push((i, None));
                continue;
            };
            let sent = &self.sentences[s];
            let mut from = sent.span.start;
            if k > 0 {
                let prev = self.components[order[k - 1]].span;
                if prev.end <= span.start && prev.end > from {
                    from = prev.end;
                }
            }
            let toks = self.token_range(Span::new(from, span.start));
            let toks: Vec<&Token> = self.tokens[toks]
                .iter()
                .filter(|t| t.sent_index == s && t.char_start >= from && t.char_end <= span.start)
                .collect();
            let pre = match (toks.first(), toks.last()) {
                (Some(a), Some(b)) => Some(Span::new(a.char_start, b.char_end)),
                _ => None,
            };
            updates.push((i, pre));
        }
        for (i, pre) in updates {
            self.components[i].preceding_span = pre;
        }
    }

    /// Token indices of a component's preceding tokens.
    pub fn preceding_tokens(&self, component: &ArgumentComponent) -> Range<usize> {
        match component.preceding_span {
            Some(span) => self.token_range(span),
            None => {
                let r = self.token_range(component.span);
                r.start..r.start
            }
        }
    }

    /// Lemma of token `i`, falling back to the lowercased surface form.
    pub fn lemma(&self, i: usize) -> String {
        match self.layers.lemmas.as_ref().and_then(|l| l.get(i)) {
            Some(l) => l.clone(),
            None => self.tokens[i].surface.to_lowercase(),
        }
    }

    pub fn pos(&self, i: usize) -> Option<&str> {
        self.layers.pos.as_ref().and_then(|p| p.get(i)).map(String::as_str)
    }
}

fn char_byte_table(text: &str) -> Vec<usize> {
    let mut table: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
    table.push(text.len());
    table
}

/// Loads every `<id>.txt` / `<id>.ann` pair of a brat directory, sorted by id.
/// An optional `<id>.json` next to them is read as the sidecar layer file.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<Document>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut ids = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "ann") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                if path.with_extension("txt").exists() {
                    ids.push(stem.to_string());
                }
            }
        }
    }
    ids.sort();
    ids.par_iter().map(|id| load_essay(dir, id)).collect()
}

/// Loads a single essay `<dir>/<id>.txt` + `.ann` (+ optional `.json` sidecar).
pub fn load_essay(dir: &Path, id: &str) -> Result<Document> {
    let base = dir.join(id);
    let txt_path = base.with_extension("txt");
    let ann_path = base.with_extension("ann");
    let text = std::fs::read_to_string(&txt_path).map_err(|e| Error::io(&txt_path, e))?;
    let ann = std::fs::read_to_string(&ann_path).map_err(|e| Error::io(&ann_path, e))?;
    let sidecar = Sidecar::load_optional(&base.with_extension("json"))?;
    parse_brat_with_layers(id, &text, &ann, sidecar.as_ref()).map_err(|e| match e {
        Error::Parse { line, message } => {
            Error::Parse { line, message: format!("{}: {message}", ann_path.display()) }
        }
        other => other,
    })
}

/// All ordered pairs `(i, j)`, `i != j`, of `n` items; source index major.
pub fn component_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Relation markables of a document: ordered pairs of component indices
/// sharing a paragraph.
pub fn relation_markables(doc: &Document) -> Vec<(usize, usize)> {
    doc.components_by_paragraph()
        .iter()
        .flat_map(|group| component_pairs(group.len()).into_iter().map(|(a, b)| (group[a], group[b])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_pairs_counts() {
        assert_eq!(component_pairs(3).len(), 6);
        assert_eq!(component_pairs(3)[0], (0, 1));
        assert_eq!(component_pairs(3)[2], (1, 0));
        assert!(component_pairs(1).is_empty());
        assert!(component_pairs(0).is_empty());
    }

    #[test]
    fn slice_uses_char_offsets() {
        let doc = Document::new("x", "Tïtle\n\nCafé au lait.\n", None).unwrap();
        assert_eq!(doc.slice(Span::new(7, 11)), "Café");
        assert_eq!(doc.tokens[0].surface, "Café");
        assert_eq!(doc.title, Some(Span::new(0, 5)));
    }

    #[test]
    fn preceding_span_stops_at_previous_component() {
        let text = "T\n\nFirst of all, cats are great because they purr.\n";
        let ann = "T1\tClaim 17 31\tcats are great\nA1\tStance T1 For\nT2\tPremise 40 49\tthey purr\nR1\tsupports Arg1:T2 Arg2:T1\n";
        let doc = parse_brat("e", text, ann).unwrap();
        let c1 = doc.component("T1").unwrap();
        assert_eq!(doc.slice(c1.preceding_span.unwrap()), "First of all,");
        let c2 = doc.component("T2").unwrap();
        assert_eq!(doc.slice(c2.preceding_span.unwrap()), "because");
    }
}
