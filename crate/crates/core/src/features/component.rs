//! Features of a single argument component, for type classification and
//! stance recognition.

use std::collections::HashSet;
use std::ops::Range;

use crate::corpus::{ComponentType, Document, ParagraphRole};

use super::{
    context_key, dependency_tuples, discourse_triples, embedding_sum, extended_range, indicator_flags,
    paragraph_position, per_sentence, pos_distribution, production_rules, ratio, scaled, surfaces, tree, Extractor,
    FeatureVector, Polarity,
};

const CLASSIFIED_TYPES: [ComponentType; 3] = [ComponentType::MajorClaim, ComponentType::Claim, ComponentType::Premise];

/// Token statistics and position of a component in its sentence and
/// paragraph, shared by the component and stance feature sets.
fn structure(doc: &Document, ci: usize, range: &Range<usize>, f: &mut FeatureVector) {
    let c = &doc.components[ci];
    if let Some(s) = doc.sentence_of(c.span) {
        let sent = doc.sentences[s].tokens.clone();
        f.set("struct:sent_tokens", scaled(sent.len()));
        f.set("struct:tokens_before", scaled(range.start.saturating_sub(sent.start)));
        f.set("struct:tokens_after", scaled(sent.end.saturating_sub(range.end)));
        f.set("struct:sent_ratio", ratio(range.len(), sent.len()));
    }
    if let Some((_, k, n)) = paragraph_position(doc, ci) {
        f.set("struct:para_components", scaled(n));
        f.set("struct:components_before", scaled(k));
        f.set("struct:components_after", scaled(n - k - 1));
        f.set("struct:para_rel", ratio(k + 1, n));
        if k == 0 {
            f.flag("struct:first_in_para");
        }
        if k + 1 == n {
            f.flag("struct:last_in_para");
        }
    }
}

fn unigrams(doc: &Document, ext: Range<usize>, f: &mut FeatureVector) {
    for i in ext {
        f.flag(format!("lex:{}", doc.lemma(i)));
    }
}

/// Lemma strings of NP or VP constituents inside `range`.
fn phrase_strings(doc: &Document, range: Range<usize>, label: &str) -> HashSet<String> {
    let mut out = HashSet::new();
    for (s, local) in per_sentence(doc, range) {
        let Some(tr) = tree(doc, s) else { continue };
        let start = doc.sentences[s].tokens.start;
        for r in tr.phrases(label, local) {
            let lemmas: Vec<String> = (r.start + start..r.end + start).map(|i| doc.lemma(i)).collect();
            out.insert(lemmas.join(" "));
        }
    }
    out
}

fn tense(doc: &Document, range: Range<usize>) -> &'static str {
    for i in range {
        match doc.pos(i) {
            Some("VBD") => return "past",
            Some("VBZ" | "VBP") => return "present",
            _ => {}
        }
    }
    "none"
}

impl Extractor<'_> {
    /// Features for classifying component `ci` as major claim, claim or premise.
    pub fn component_features(&self, doc: &Document, ci: usize) -> FeatureVector {
        let mut f = FeatureVector::new();
        let c = &doc.components[ci];
        let range = doc.token_range(c.span);
        let pre = doc.preceding_tokens(c);
        let ext = extended_range(doc, c.span, pre.clone());

        unigrams(doc, ext.clone(), &mut f);
        for t in dependency_tuples(doc, ext.clone()) {
            if self.tables.dependency_tuples.contains(&t) {
                f.flag(format!("dep:{t}"));
            }
        }

        f.set("struct:tokens", scaled(range.len()));
        structure(doc, ci, &range, &mut f);
        let para = doc.paragraph_of(c.span);
        if let Some(p) = para {
            f.set("struct:para_tokens", scaled(doc.paragraph_token_range(p).len()));
            match doc.paragraph_role(p) {
                ParagraphRole::Introduction => f.flag("genre:intro"),
                ParagraphRole::Conclusion => f.flag("genre:concl"),
                ParagraphRole::Body => {}
            }
        }

        let words = surfaces(doc, ext.clone());
        indicator_flags(self.lexicon, &words, "ind:", "", &mut f);
        if self.lexicon.has_first_person(&words) {
            f.flag("ind:first_person");
        }

        if let Some(p) = para {
            let prange = doc.paragraph_token_range(p);
            indicator_flags(self.lexicon, &surfaces(doc, prange.start..ext.start), "ctx:", "_before", &mut f);
            indicator_flags(self.lexicon, &surfaces(doc, range.end..prange.end), "ctx:", "_after", &mut f);
        }
        if doc.layers.trees.is_some() && doc.paragraphs.len() > 1 {
            let last = doc.paragraphs.len() - 1;
            for label in ["NP", "VP"] {
                let mine = phrase_strings(doc, range.clone(), label);
                for (name, p) in [("intro", 0), ("concl", last)] {
                    let theirs = phrase_strings(doc, doc.paragraph_token_range(p), label);
                    let shared = mine.intersection(&theirs).count();
                    let lower = label.to_lowercase();
                    f.set(format!("genre:shared_{lower}_{name}"), scaled(shared));
                    if shared > 0 {
                        f.flag(format!("genre:shares_{lower}_{name}"));
                    }
                }
            }
        }

        pos_distribution(doc, range.clone(), "syn:pos=", &mut f);
        if doc.layers.pos.is_some() {
            f.flag(format!("syn:tense={}", tense(doc, range.clone())));
            if range.clone().any(|i| doc.pos(i) == Some("MD")) {
                f.flag("syn:modal");
            }
        }
        if let Some(tr) = doc.sentence_of(c.span).and_then(|s| tree(doc, s)) {
            f.set("syn:subclauses", scaled(tr.subclauses()));
            f.set("syn:depth", scaled(tr.depth()));
        }

        if !pre.is_empty() {
            let key = context_key(&surfaces(doc, pre));
            for t in CLASSIFIED_TYPES {
                f.set(format!("prob:{}", t.as_str()), self.tables.types.probability(&key, t.as_str()));
            }
        }

        for t in discourse_triples(doc, c.span) {
            f.flag(format!("disc:{t}"));
        }
        embedding_sum(doc, ext, self.embeddings, &mut f);
        f
    }

    /// Features for recognizing whether component `ci` supports or attacks.
    pub fn stance_features(&self, doc: &Document, ci: usize) -> FeatureVector {
        let mut f = FeatureVector::new();
        let c = &doc.components[ci];
        let range = doc.token_range(c.span);
        let ext = extended_range(doc, c.span, doc.preceding_tokens(c));

        unigrams(doc, ext.clone(), &mut f);

        if let Some(lex) = self.subjectivity {
            let mut counts = [0usize; 3];
            for i in range.clone() {
                let polarity = lex.get(&doc.lemma(i)).or_else(|| lex.get(&doc.tokens[i].surface));
                match polarity {
                    Some(Polarity::Positive) => counts[0] += 1,
                    Some(Polarity::Negative) => counts[1] += 1,
                    Some(Polarity::Neutral) => counts[2] += 1,
                    None => {}
                }
            }
            if counts[1] > 0 {
                f.flag("senti:has_negative");
            }
            f.set("senti:positive", counts[0] as f64);
            f.set("senti:negative", counts[1] as f64);
            f.set("senti:neutral", counts[2] as f64);
            f.set("senti:pos_minus_neg", counts[0] as f64 - counts[1] as f64);
        }
        if let (Some(scores), Some(s)) = (&doc.layers.sentiment, doc.sentence_of(c.span)) {
            for (k, v) in scores[s].iter().enumerate() {
                f.set(format!("senti:score{k}"), *v);
            }
        }

        pos_distribution(doc, range.clone(), "syn:pos=", &mut f);
        for r in production_rules(doc, range.clone()) {
            f.flag(format!("syn:rule={r}"));
        }

        structure(doc, ci, &range, &mut f);
        for t in discourse_triples(doc, c.span) {
            f.flag(format!("disc:{t}"));
        }
        embedding_sum(doc, ext, self.embeddings, &mut f);
        f
    }
}
