//! Per-token features for component identification.

use crate::corpus::{Document, IobLabel, ParagraphRole};

use super::{context_key, ratio, scaled, tree, Extractor, FeatureVector, MAX_CONTEXT};

fn is_punct(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| !c.is_alphanumeric())
}

fn punctuation(prefix: &str, s: &str, out: &mut FeatureVector) {
    if !is_punct(s) {
        return;
    }
    out.flag(format!("struct:{prefix}punct"));
    match s {
        "." => out.flag(format!("struct:{prefix}stop")),
        "," => out.flag(format!("struct:{prefix}comma")),
        ";" => out.flag(format!("struct:{prefix}semicolon")),
        _ => {}
    }
}

impl Extractor<'_> {
    /// Features of token `i`; LCA ratios are -1 at sentence boundaries.
    pub fn token_features(&self, doc: &Document, i: usize) -> FeatureVector {
        let mut f = FeatureVector::new();
        let t = &doc.tokens[i];
        let (s, p) = (t.sent_index, t.para_index);
        let sent = &doc.sentences[s];
        let local = i - sent.tokens.start;
        let slen = sent.tokens.len();
        let prange = doc.paragraph_token_range(p);
        let para_sents = &doc.paragraphs[p].sentences;

        match doc.paragraph_role(p) {
            ParagraphRole::Introduction => f.flag("genre:intro"),
            ParagraphRole::Conclusion => f.flag("genre:concl"),
            ParagraphRole::Body => {}
        }
        if local == 0 {
            f.flag("struct:first_in_sent");
        }
        if local + 1 == slen {
            f.flag("struct:last_in_sent");
        }
        f.set("struct:doc_pos", scaled(i));
        f.set("struct:doc_rel", ratio(i + 1, doc.tokens.len()));
        f.set("struct:para_pos", scaled(i - prange.start));
        f.set("struct:para_rel", ratio(i + 1 - prange.start, prange.len()));
        f.set("struct:sent_pos", scaled(local));
        f.set("struct:sent_rel", ratio(local + 1, slen));
        f.set("struct:sent_doc_pos", scaled(s));
        f.set("struct:sent_doc_rel", ratio(s + 1, doc.sentences.len()));
        f.set("struct:sent_para_pos", scaled(s - para_sents.start));
        f.set("struct:sent_para_rel", ratio(s + 1 - para_sents.start, para_sents.len()));
        punctuation("", &t.surface, &mut f);
        if i > 0 {
            punctuation("after_", &doc.tokens[i - 1].surface, &mut f);
        }
        if let Some(next) = doc.tokens.get(i + 1) {
            punctuation("before_", &next.surface, &mut f);
        }

        if let Some(pos) = doc.pos(i) {
            f.flag(format!("syn:pos={pos}"));
        }
        if let Some(tr) = tree(doc, s) {
            let depth = tr.depth().max(1) as f64;
            let mut lca = |name: &str, other: Option<usize>| match other {
                Some(o) => {
                    let len = tr.lca_path_len(local, o).unwrap_or(0);
                    f.set(format!("syn:lca_{name}"), len as f64 / depth);
                    if let Some(n) = tr.lca(local, o) {
                        f.flag(format!("syn:lca_{name}_type={}", tr.nodes[n].label));
                    }
                }
                None => f.set(format!("syn:lca_{name}"), -1.0),
            };
            lca("pre", local.checked_sub(1));
            lca("fol", (local + 1 < slen).then_some(local + 1));
            self.lexsyn(doc, s, local, &mut f);
        }

        let best = (1..=MAX_CONTEXT.min(i))
            .map(|n| {
                let words: Vec<&str> = doc.tokens[i - n..i].iter().map(|t| t.surface.as_str()).collect();
                self.tables.argb.probability(&context_key(&words), IobLabel::ArgB.as_str())
            })
            .fold(0.0, f64::max);
        f.set("prob:argb", best);
        f
    }

    /// Head-projection features: the uppermost node headed by the token, the
    /// child on the path down to it and that child's right sibling.
    fn lexsyn(&self, doc: &Document, s: usize, local: usize, f: &mut FeatureVector) {
        let Some(tr) = tree(doc, s) else { return };
        let Some(top) = tr.maximal_projection(local) else { return };
        let word = doc.sentence_tokens(s)[local].surface.to_lowercase();
        let head_word = |n: usize| doc.sentence_tokens(s)[tr.nodes[n].head].surface.to_lowercase();
        let label = |n: usize| tr.nodes[n].label.as_str();
        f.flag(format!("lexsyn:{word}/{}", label(top)));
        let children = &tr.nodes[top].children;
        let Some(k) = children.iter().position(|&c| tr.nodes[c].span.contains(&local)) else { return };
        let child = children[k];
        if tr.nodes[child].leaf.is_some() {
            return;
        }
        let sibling = children.get(k + 1).copied();
        f.flag(format!("lexsyn:{}/{}/{}", label(top), label(child), sibling.map_or("NONE", label)));
        f.flag(format!("lexsyn:hc={}/{word}", label(child)));
        if let Some(sib) = sibling {
            f.flag(format!("lexsyn:rs={}/{}", label(sib), head_word(sib)));
        }
    }

    /// Features for every token of the essay.
    pub fn sequence_features(&self, doc: &Document) -> Vec<FeatureVector> {
        (0..doc.tokens.len()).map(|i| self.token_features(doc, i)).collect()
    }
}
