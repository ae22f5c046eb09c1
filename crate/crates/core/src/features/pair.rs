//! Features of an ordered (source, target) component pair for relation
//! identification.

use std::collections::BTreeSet;

use crate::corpus::{Document, ParagraphRole};
use crate::error::{Error, Result};

use super::{
    discourse_triples, extended_range, indicator_flags, paragraph_position, production_rules, ratio, scaled, surfaces,
    Direction, Extractor, FeatureVector,
};

fn nouns(doc: &Document, range: std::ops::Range<usize>) -> BTreeSet<String> {
    range.filter(|&i| doc.pos(i).is_some_and(|p| p.starts_with("NN"))).map(|i| doc.lemma(i)).collect()
}

impl Extractor<'_> {
    /// Features of the pair (`src`, `tgt`). Both components must lie in the
    /// same paragraph.
    pub fn pair_features(&self, doc: &Document, src: usize, tgt: usize) -> Result<FeatureVector> {
        let (cs, ct) = (&doc.components[src], &doc.components[tgt]);
        if src == tgt {
            return Err(Error::Contract(format!("{}: pair of {} with itself", doc.essay_id, cs.id)));
        }
        let (Some((p, ks, n)), Some((pt, kt, _))) = (paragraph_position(doc, src), paragraph_position(doc, tgt)) else {
            return Err(Error::Contract(format!("{}: {} or {} lies outside a paragraph", doc.essay_id, cs.id, ct.id)));
        };
        if p != pt {
            return Err(Error::Contract(format!(
                "{}: {} and {} are in different paragraphs",
                doc.essay_id, cs.id, ct.id
            )));
        }
        let mut f = FeatureVector::new();
        let sides = [("src", src), ("tgt", tgt)];
        let ranges = [doc.token_range(cs.span), doc.token_range(ct.span)];
        let exts = [
            extended_range(doc, cs.span, doc.preceding_tokens(cs)),
            extended_range(doc, ct.span, doc.preceding_tokens(ct)),
        ];

        for ((name, _), ext) in sides.iter().zip(&exts) {
            for i in ext.clone() {
                let l = doc.lemma(i);
                if self.tables.pair_unigrams.contains(&l) {
                    f.flag(format!("lex:{name}={l}"));
                }
            }
        }

        for ((name, _), range) in sides.iter().zip(&ranges) {
            for i in range.clone() {
                if let Some(pos) = doc.pos(i) {
                    f.flag(format!("syn:{name}_pos={pos}"));
                }
            }
            for r in production_rules(doc, range.clone()) {
                if self.tables.pair_rules.contains(&r) {
                    f.flag(format!("syn:{name}_rule={r}"));
                }
            }
        }

        f.set("struct:src_tokens", scaled(ranges[0].len()));
        f.set("struct:tgt_tokens", scaled(ranges[1].len()));
        f.set("struct:between", scaled(ks.abs_diff(kt) - 1));
        f.set("struct:para_components", scaled(n));
        if doc.sentence_of(cs.span) == doc.sentence_of(ct.span) {
            f.flag("struct:same_sentence");
        }
        if kt < ks {
            f.flag("struct:tgt_before_src");
        }
        for (name, k) in [("src", ks), ("tgt", kt)] {
            if k == 0 {
                f.flag(format!("struct:{name}_first"));
            }
            if k + 1 == n {
                f.flag(format!("struct:{name}_last"));
            }
        }
        match doc.paragraph_role(p) {
            ParagraphRole::Introduction => f.flag("genre:pair_intro"),
            ParagraphRole::Conclusion => f.flag("genre:pair_concl"),
            ParagraphRole::Body => {}
        }

        for ((name, _), ext) in sides.iter().zip(&exts) {
            indicator_flags(self.lexicon, &surfaces(doc, ext.clone()), &format!("ind:{name}_"), "", &mut f);
        }
        let (first, second) = if ranges[0].start <= ranges[1].start { (0, 1) } else { (1, 0) };
        let between = ranges[first].end..exts[second].start.max(ranges[first].end);
        indicator_flags(self.lexicon, &surfaces(doc, between), "ind:between_", "", &mut f);
        let prange = doc.paragraph_token_range(p);
        indicator_flags(self.lexicon, &surfaces(doc, prange.start..exts[first].start), "ind:before_", "", &mut f);
        indicator_flags(self.lexicon, &surfaces(doc, ranges[second].end..prange.end), "ind:after_", "", &mut f);

        for (name, idx) in sides {
            for t in discourse_triples(doc, doc.components[idx].span) {
                f.flag(format!("disc:{name}_{t}"));
            }
        }

        let mut any = [false; 4];
        for ((name, _), range) in sides.iter().zip(&ranges) {
            let mut counts = [0usize; 4];
            for i in range.clone() {
                let l = doc.lemma(i);
                for (d, dir) in [Direction::Incoming, Direction::Outgoing].into_iter().enumerate() {
                    let v = self.tables.pmi.get(&l, dir);
                    if v > 0.0 {
                        counts[2 * d] += 1;
                    } else if v < 0.0 {
                        counts[2 * d + 1] += 1;
                    }
                }
            }
            for (k, key) in ["in_pos", "in_neg", "out_pos", "out_neg"].iter().enumerate() {
                f.set(format!("pmi:{name}_{key}"), ratio(counts[k], range.len()));
                any[k] |= counts[k] > 0;
            }
        }
        for (k, key) in ["in_pos", "in_neg", "out_pos", "out_neg"].iter().enumerate() {
            if any[k] {
                f.flag(format!("pmi:any_{key}"));
            }
        }

        if doc.layers.pos.is_some() {
            let shared = nouns(doc, ranges[0].clone()).intersection(&nouns(doc, ranges[1].clone())).count();
            f.set("shno:count", shared as f64);
            if shared > 0 {
                f.flag("shno:any");
            }
        }
        Ok(f)
    }
}
