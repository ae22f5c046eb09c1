use std::collections::BTreeMap;
use std::path::PathBuf;

use argstruct::corpus::{
    corpus_stats, decode_iob, encode_iob, load_corpus_dir, load_split, relation_markables, to_brat,
    validate_attributes, validate_document, parse_brat, SplitSet,
};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn fixture_stats_match_hand_counts() {
    let docs = load_corpus_dir(&fixtures().join("essays")).unwrap();
    let expected: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixtures().join("expected_stats.json")).unwrap()).unwrap();
    let stats = corpus_stats(&docs);
    let totals: BTreeMap<String, u64> = serde_json::from_value(expected["totals"].clone()).unwrap();
    for (key, want) in totals {
        let got = if key == "essays" { stats.essays } else { stats.total(&key) };
        assert_eq!(got as u64, want, "{key}");
    }
}

#[test]
fn fixture_documents_are_valid_forests() {
    for doc in load_corpus_dir(&fixtures().join("essays")).unwrap() {
        assert!(validate_document(&doc).is_empty(), "{}: {:?}", doc.essay_id, validate_document(&doc));
        assert!(validate_attributes(&doc).is_empty(), "{}", doc.essay_id);
    }
}

#[test]
fn iob_round_trip_on_fixture() {
    for doc in load_corpus_dir(&fixtures().join("essays")).unwrap() {
        let spans = decode_iob(&encode_iob(&doc), &doc.tokens);
        let gold: Vec<_> = doc.components.iter().map(|c| doc.token_range(c.span)).collect();
        let got: Vec<_> = spans.into_iter().map(|s| s.tokens).collect();
        assert_eq!(got, gold, "{}", doc.essay_id);
    }
}

#[test]
fn brat_round_trip_on_fixture() {
    for doc in load_corpus_dir(&fixtures().join("essays")).unwrap() {
        let again = parse_brat(&doc.essay_id, &doc.text, &to_brat(&doc)).unwrap();
        assert_eq!(doc, again);
    }
}

#[test]
fn markable_count_is_sum_over_paragraphs() {
    for doc in load_corpus_dir(&fixtures().join("essays")).unwrap() {
        let expected: usize = doc.components_by_paragraph().iter().map(|g| g.len() * g.len().saturating_sub(1)).sum();
        assert_eq!(relation_markables(&doc).len(), expected);
    }
}

#[test]
fn fixture_split_partitions_corpus() {
    let spec = load_split(&fixtures().join("split.csv")).unwrap();
    let docs = load_corpus_dir(&fixtures().join("essays")).unwrap();
    let part = spec.partition(docs).unwrap();
    assert_eq!(part.test.len(), spec.ids(SplitSet::Test).len());
    assert_eq!(part.train.len() + part.test.len(), 40);
}
