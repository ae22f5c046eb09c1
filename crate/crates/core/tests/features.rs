use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use argstruct::corpus::{encode_iob, load_corpus_dir, Document, IobLabel};
use argstruct::features::{
    estimate_argb_probabilities, estimate_pmi, estimate_type_probabilities, Direction, Extractor, FeatureTables,
    IndicatorLexicon,
};

fn corpus() -> Vec<Document> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/essays");
    load_corpus_dir(&dir).unwrap()
}

fn lower(doc: &Document) -> Vec<String> {
    doc.tokens.iter().map(|t| t.surface.to_lowercase()).collect()
}

#[test]
fn argb_table_equals_naive_counts() {
    let docs: Vec<Document> = corpus().into_iter().take(8).collect();
    let table = estimate_argb_probabilities(&docs);
    // Naive: every (n-gram, next label) occurrence.
    let mut total: HashMap<String, usize> = HashMap::new();
    let mut hits: HashMap<String, usize> = HashMap::new();
    for doc in &docs {
        let words = lower(doc);
        let labels = encode_iob(doc);
        for i in 0..words.len() {
            for n in 1..=3 {
                if n > i {
                    continue;
                }
                let key = words[i - n..i].join(" ");
                *total.entry(key.clone()).or_default() += 1;
                if labels[i] == IobLabel::ArgB {
                    *hits.entry(key).or_default() += 1;
                }
            }
        }
    }
    for (key, t) in &total {
        let want = hits.get(key).copied().unwrap_or(0) as f64 / *t as f64;
        assert!((table.probability(key, "Arg-B") - want).abs() < 1e-12, "{key}");
    }
    assert!(!hits.is_empty());
}

#[test]
fn type_table_equals_naive_counts() {
    let docs: Vec<Document> = corpus().into_iter().take(8).collect();
    let table = estimate_type_probabilities(&docs);
    let mut hits: HashMap<(String, String), usize> = HashMap::new();
    let mut contexts: BTreeSet<String> = BTreeSet::new();
    for doc in &docs {
        let words = lower(doc);
        for c in &doc.components {
            let pre = doc.preceding_tokens(c);
            if pre.is_empty() {
                continue;
            }
            let key = words[pre].join(" ");
            contexts.insert(key.clone());
            *hits.entry((key, c.ctype.as_str().to_string())).or_default() += 1;
        }
    }
    for key in &contexts {
        let n = key.split(' ').count();
        let mut occurrences = 0;
        for doc in &docs {
            let words = lower(doc);
            occurrences += (n..words.len()).filter(|&i| words[i - n..i].join(" ") == *key).count();
        }
        for t in ["MajorClaim", "Claim", "Premise"] {
            let want = hits.get(&(key.clone(), t.to_string())).copied().unwrap_or(0) as f64 / occurrences as f64;
            assert!((table.probability(key, t) - want).abs() < 1e-12, "{key} {t}");
        }
    }
}

#[test]
fn pmi_equals_direct_formula_and_survives_duplication() {
    let docs: Vec<Document> = corpus().into_iter().take(10).collect();
    let table = estimate_pmi(&docs);
    let mut units: Vec<(BTreeSet<String>, bool, bool)> = Vec::new();
    for doc in &docs {
        for c in &doc.components {
            let lemmas = doc.token_range(c.span).map(|i| doc.tokens[i].surface.to_lowercase()).collect();
            let out = doc.relations.iter().any(|r| r.source == c.id);
            let inc = doc.relations.iter().any(|r| r.target == c.id);
            units.push((lemmas, inc, out));
        }
    }
    let n = units.len() as f64;
    let vocab: BTreeSet<&String> = units.iter().flat_map(|u| &u.0).collect();
    for t in vocab {
        let p_t = units.iter().filter(|u| u.0.contains(t)).count() as f64 / n;
        for (dir, pick) in [(Direction::Incoming, 1), (Direction::Outgoing, 2)] {
            let has = |u: &(BTreeSet<String>, bool, bool)| if pick == 1 { u.1 } else { u.2 };
            let p_d = units.iter().filter(|u| has(u)).count() as f64 / n;
            let p_td = units.iter().filter(|u| has(u) && u.0.contains(t)).count() as f64 / n;
            let want = if p_td == 0.0 { 0.0 } else { (p_td / (p_t * p_d)).ln() };
            assert!((table.get(t, dir) - want).abs() < 1e-12, "{t} {dir:?}");
        }
    }

    let doubled: Vec<Document> = docs.iter().chain(docs.iter()).cloned().collect();
    let again = estimate_pmi(&doubled);
    for (k, v) in &table.incoming {
        assert!((again.incoming[k] - v).abs() < 1e-12);
    }
    assert_eq!(table.outgoing.len(), again.outgoing.len());
}

#[test]
fn extraction_is_deterministic_and_bounded() {
    let docs = corpus();
    let (train, test) = docs.split_at(30);
    let tables = FeatureTables::fit(train);
    let lex = IndicatorLexicon::default();
    let ex = Extractor::new(&tables, &lex);
    for doc in test {
        let a = ex.sequence_features(doc);
        assert_eq!(a, ex.sequence_features(doc));
        for f in &a {
            let p = f.get("prob:argb");
            assert!((0.0..=1.0).contains(&p));
            assert!(f.iter().all(|(_, v)| v.is_finite()));
        }
        for ci in 0..doc.components.len() {
            let f = ex.component_features(doc, ci);
            assert_eq!(f, ex.component_features(doc, ci));
            for t in ["MajorClaim", "Claim", "Premise"] {
                assert!((0.0..=1.0).contains(&f.get(&format!("prob:{t}"))));
            }
        }
    }
}

#[test]
fn disabling_a_group_removes_exactly_its_names() {
    let docs = corpus();
    let tables = FeatureTables::fit(&docs[..30]);
    let lex = IndicatorLexicon::default();
    let ex = Extractor::new(&tables, &lex);
    let doc = &docs[35];
    for ci in 0..doc.components.len() {
        let full = ex.component_features(doc, ci);
        let mut reduced = full.clone();
        reduced.retain_groups(|g| g != "ind");
        let removed: Vec<&str> = full.keys().filter(|k| !reduced.contains(k)).collect();
        assert!(removed.iter().all(|k| k.starts_with("ind:")));
        assert_eq!(removed.len(), full.keys().filter(|k| k.starts_with("ind:")).count());
    }
}
