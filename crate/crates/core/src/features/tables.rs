//! Statistics estimated from training documents: Arg-B and component-type
//! probabilities given preceding tokens, and lemma/direction PMI.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{encode_iob, Document, IobLabel};

/// Context n-grams are keyed by their lowercased surfaces joined by spaces.
pub fn context_key<S: AsRef<str>>(words: &[S]) -> String {
    words.iter().map(|w| w.as_ref().to_lowercase()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextCounts {
    /// Occurrences of the context directly followed by a token.
    pub total: usize,
    pub outcomes: BTreeMap<String, usize>,
}

/// P(outcome | preceding tokens) as a ratio of counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    pub contexts: BTreeMap<String, ContextCounts>,
}

impl ProbabilityTable {
    pub fn probability(&self, context: &str, outcome: &str) -> f64 {
        match self.contexts.get(context) {
            Some(c) if c.total > 0 => c.outcomes.get(outcome).copied().unwrap_or(0) as f64 / c.total as f64,
            _ => 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    /// Counts every occurrence (followed by a token) of the stored contexts.
    fn count_totals(&mut self, docs: &[Document]) {
        let lengths: BTreeSet<usize> = self.contexts.keys().map(|k| k.split(' ').count()).collect();
        for doc in docs {
            let words: Vec<String> = doc.tokens.iter().map(|t| t.surface.to_lowercase()).collect();
            for &n in &lengths {
                for i in n..words.len() {
                    if let Some(c) = self.contexts.get_mut(&words[i - n..i].join(" ")) {
                        c.total += 1;
                    }
                }
            }
        }
    }
}

pub const MAX_CONTEXT: usize = 3;

/// P(t_i = Arg-B | t_{i-n} .. t_{i-1}) for n = 1..3 over whole-essay token
/// sequences. Contexts that never precede an Arg-B are dropped (probability 0).
pub fn estimate_argb_probabilities(docs: &[Document]) -> ProbabilityTable {
    let mut table = ProbabilityTable::default();
    for doc in docs {
        let labels = encode_iob(doc);
        for (i, &l) in labels.iter().enumerate() {
            if l != IobLabel::ArgB {
                continue;
            }
            for n in 1..=MAX_CONTEXT.min(i) {
                let key = context_key(&surfaces(doc, i - n..i));
                *table.contexts.entry(key).or_default().outcomes.entry(IobLabel::ArgB.as_str().to_string()).or_default() += 1;
            }
        }
    }
    table.count_totals(docs);
    table
}

/// P(type | preceding tokens of the component), where the context is the full
/// preceding-token sequence. Components without preceding tokens are skipped.
pub fn estimate_type_probabilities(docs: &[Document]) -> ProbabilityTable {
    let mut table = ProbabilityTable::default();
    for doc in docs {
        for c in &doc.components {
            let pre = doc.preceding_tokens(c);
            if pre.is_empty() {
                continue;
            }
            let key = context_key(&surfaces(doc, pre));
            *table.contexts.entry(key).or_default().outcomes.entry(c.ctype.as_str().to_string()).or_default() += 1;
        }
    }
    table.count_totals(docs);
    table
}

fn surfaces(doc: &Document, range: std::ops::Range<usize>) -> Vec<&str> {
    doc.tokens[range].iter().map(|t| t.surface.as_str()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Incoming,
    Outgoing,
}

/// PMI between a lemma and a relation direction, with components as the
/// counting unit. Unseen (lemma, direction) pairs have PMI 0.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PmiTable {
    pub incoming: BTreeMap<String, f64>,
    pub outgoing: BTreeMap<String, f64>,
}

impl PmiTable {
    pub fn get(&self, lemma: &str, d: Direction) -> f64 {
        let map = match d {
            Direction::Incoming => &self.incoming,
            Direction::Outgoing => &self.outgoing,
        };
        map.get(lemma).copied().unwrap_or(0.0)
    }
}

/// PMI(t, d) = ln(p(t, d) / (p(t) p(d))), where p(t) is the share of
/// components containing lemma t, p(d) the share having at least one relation
/// of direction d, and p(t, d) the share having both.
pub fn estimate_pmi(docs: &[Document]) -> PmiTable {
    let mut n = 0usize;
    let mut n_dir = [0usize; 2];
    let mut n_t: HashMap<String, usize> = HashMap::new();
    let mut n_td: [HashMap<String, usize>; 2] = [HashMap::new(), HashMap::new()];
    for doc in docs {
        let has_out: HashSet<&str> = doc.relations.iter().map(|r| r.source.as_str()).collect();
        let has_in: HashSet<&str> = doc.relations.iter().map(|r| r.target.as_str()).collect();
        for c in &doc.components {
            n += 1;
            let dirs = [has_in.contains(c.id.as_str()), has_out.contains(c.id.as_str())];
            let lemmas: BTreeSet<String> = doc.token_range(c.span).map(|i| doc.lemma(i)).collect();
            for (k, &d) in dirs.iter().enumerate() {
                n_dir[k] += usize::from(d);
            }
            for l in lemmas {
                for (k, &d) in dirs.iter().enumerate() {
                    if d {
                        *n_td[k].entry(l.clone()).or_default() += 1;
                    }
                }
                *n_t.entry(l).or_default() += 1;
            }
        }
    }
    let mut table = PmiTable::default();
    for (k, counts) in n_td.iter().enumerate() {
        let map = if k == 0 { &mut table.incoming } else { &mut table.outgoing };
        for (l, &c) in counts {
            // p(t,d) / (p(t) p(d)) = c * n / (n_t * n_d)
            let ratio = (c as f64 * n as f64) / (n_t[l] as f64 * n_dir[k] as f64);
            map.insert(l.clone(), ratio.ln());
        }
    }
    table
}

/// The `k` most frequent keys; ties go to the lexicographically smaller key.
pub fn most_frequent(counts: &HashMap<String, usize>, k: usize) -> BTreeSet<String> {
    let mut items: Vec<(&String, usize)> = counts.iter().map(|(s, &c)| (s, c)).collect();
    items.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    items.into_iter().take(k).map(|(s, _)| s.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_brat;

    #[test]
    fn argb_probability_of_always_preceding_word() {
        let text = "T\n\nX because we act. Y because they care.\n";
        // "because" precedes both components.
        let ann = "T1\tPremise 13 19\twe act\nT2\tPremise 31 40\tthey care\n";
        let doc = parse_brat("e", text, ann).unwrap();
        let t = estimate_argb_probabilities(&[doc]);
        assert_eq!(t.probability("because", "Arg-B"), 1.0);
        assert_eq!(t.probability("x", "Arg-B"), 0.0);
        assert_eq!(t.probability("x because", "Arg-B"), 1.0);
        assert_eq!(t.probability(". y because", "Arg-B"), 1.0);
    }

    #[test]
    fn type_probability_counts_all_occurrences() {
        let text = "T\n\nIn my opinion we act. In my opinion it rains.\nIn my opinion\n";
        let ann = "T1\tMajorClaim 17 23\twe act\n";
        let doc = parse_brat("e", text, ann).unwrap();
        let t = estimate_type_probabilities(&[doc]);
        // Three occurrences of the context but the last is not followed by a token.
        assert_eq!(t.probability("in my opinion", "MajorClaim"), 0.5);
        assert_eq!(t.probability("in my opinion", "Claim"), 0.0);
        assert_eq!(t.probability("unseen", "Claim"), 0.0);
    }

    #[test]
    fn pmi_signs() {
        let text = "T\n\nalpha beta. gamma beta. delta.\n";
        let ann = "T1\tClaim 3 13\talpha beta\nT2\tPremise 15 25\tgamma beta\nT3\tPremise 27 32\tdelta\n\
                   R1\tsupports Arg1:T2 Arg2:T1\n";
        let doc = parse_brat("e", text, ann).unwrap();
        let t = estimate_pmi(&[doc]);
        // gamma only in the outgoing component: ln((1*3)/(1*1)).
        assert!((t.get("gamma", Direction::Outgoing) - 3f64.ln()).abs() < 1e-12);
        assert_eq!(t.get("gamma", Direction::Incoming), 0.0);
        // beta in both T1 and T2, one of which is outgoing: ln((1*3)/(2*1)).
        assert!((t.get("beta", Direction::Outgoing) - 1.5f64.ln()).abs() < 1e-12);
        assert_eq!(t.get("delta", Direction::Outgoing), 0.0);
    }

    #[test]
    fn most_frequent_breaks_ties_lexicographically() {
        let counts: HashMap<String, usize> =
            [("b", 2), ("a", 2), ("c", 5), ("d", 1)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let top: Vec<String> = most_frequent(&counts, 2).into_iter().collect();
        assert_eq!(top, vec!["a".to_string(), "c".to_string()]);
    }
}
