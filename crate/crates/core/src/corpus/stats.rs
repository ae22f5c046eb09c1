//! Corpus-level size and annotation counts.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{ComponentType, Document, RelationType, Stance};

/// Per-essay counts, plus totals and per-essay mean / standard deviation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub essays: usize,
    pub totals: BTreeMap<String, usize>,
    pub per_essay: Vec<BTreeMap<String, usize>>,
}

/// One row of the statistics table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub name: String,
    pub total: usize,
    pub mean: f64,
    pub std_dev: f64,
}

/// Count keys in table order.
pub const STAT_KEYS: [(&str, &str); 14] = [
    ("sentences", "Sentences"),
    ("tokens", "Tokens"),
    ("paragraphs", "Paragraphs"),
    ("components", "Arg. components"),
    ("major_claims", "MajorClaims"),
    ("claims", "Claims"),
    ("premises", "Premises"),
    ("claims_for", "Claims (for)"),
    ("claims_against", "Claims (against)"),
    ("supports", "Support"),
    ("attacks", "Attack"),
    ("arguments", "Arguments"),
    ("arguments_with_attack", "Arguments with attack"),
    ("serial_arguments", "Serial arguments"),
];

pub fn corpus_stats(corpus: &[Document]) -> CorpusStats {
    let per_essay: Vec<BTreeMap<String, usize>> = corpus.iter().map(essay_counts).collect();
    let mut totals: BTreeMap<String, usize> = STAT_KEYS.iter().map(|(k, _)| (k.to_string(), 0)).collect();
    for counts in &per_essay {
        for (k, v) in counts {
            *totals.entry(k.clone()).or_default() += v;
        }
    }
    CorpusStats { essays: corpus.len(), totals, per_essay }
}

impl CorpusStats {
    pub fn total(&self, key: &str) -> usize {
        self.totals.get(key).copied().unwrap_or(0)
    }

    pub fn mean(&self, key: &str) -> f64 {
        if self.essays == 0 {
            return 0.0;
        }
        self.total(key) as f64 / self.essays as f64
    }

    /// Sample standard deviation over essays.
    pub fn std_dev(&self, key: &str) -> f64 {
        if self.essays < 2 {
            return 0.0;
        }
        let mean = self.mean(key);
        let ss: f64 = self.per_essay.iter().map(|c| (c.get(key).copied().unwrap_or(0) as f64 - mean).powi(2)).sum();
        (ss / (self.essays - 1) as f64).sqrt()
    }

    pub fn rows(&self) -> Vec<StatRow> {
        let mut rows = vec![StatRow { name: "Essays".into(), total: self.essays, mean: 1.0, std_dev: 0.0 }];
        rows.extend(STAT_KEYS.iter().map(|(key, name)| StatRow {
            name: name.to_string(),
            total: self.total(key),
            mean: self.mean(key),
            std_dev: self.std_dev(key),
        }));
        rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("statistic,all,avg_per_essay,std_dev\n");
        for r in self.rows() {
            out.push_str(&format!("{},{},{:.3},{:.3}\n", r.name, r.total, r.mean, r.std_dev));
        }
        out
    }
}

fn essay_counts(doc: &Document) -> BTreeMap<String, usize> {
    let count_type = |t: ComponentType| doc.components.iter().filter(|c| c.ctype == t).count();
    let count_stance = |s: Stance| doc.components.iter().filter(|c| c.stance == Some(s)).count();
    let count_rel = |t: RelationType| doc.relations.iter().filter(|r| r.rtype == t).count();

    let mut incoming: HashMap<&str, Vec<&str>> = HashMap::new();
    let mut attackers: HashSet<&str> = HashSet::new();
    for r in &doc.relations {
        incoming.entry(r.target.as_str()).or_default().push(r.source.as_str());
        if r.rtype == RelationType::Attack {
            attackers.insert(r.source.as_str());
        }
    }
    // An argument is a claim with at least one incoming relation.
    let mut arguments = 0;
    let mut serial = 0;
    let mut with_attack = 0;
    for c in doc.components.iter().filter(|c| c.ctype == ComponentType::Claim) {
        let Some(children) = incoming.get(c.id.as_str()) else { continue };
        arguments += 1;
        let mut seen: HashSet<&str> = HashSet::new();
        let mut stack: Vec<(&str, usize)> = children.iter().map(|&s| (s, 1)).collect();
        let mut depth = 0;
        let mut attacked = false;
        while let Some((node, d)) = stack.pop() {
            if !seen.insert(node) {
                continue;
            }
            depth = depth.max(d);
            attacked |= attackers.contains(node);
            if let Some(next) = incoming.get(node) {
                stack.extend(next.iter().map(|&s| (s, d + 1)));
            }
        }
        serial += usize::from(depth > 1);
        with_attack += usize::from(attacked);
    }

    let values = [
        doc.sentences.len(),
        doc.tokens.len(),
        doc.paragraphs.len(),
        doc.components.len(),
        count_type(ComponentType::MajorClaim),
        count_type(ComponentType::Claim),
        count_type(ComponentType::Premise),
        count_stance(Stance::For),
        count_stance(Stance::Against),
        count_rel(RelationType::Support),
        count_rel(RelationType::Attack),
        arguments,
        with_attack,
        serial,
    ];
    STAT_KEYS.iter().zip(values).map(|((k, _), v)| (k.to_string(), v)).collect()
}
