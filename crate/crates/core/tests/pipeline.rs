//! End-to-end runs on the fixture: determinism of training and parsing, and
//! the command line from training to parsing.

use std::path::PathBuf;

use argstruct::corpus::{load_corpus_dir, load_split, parse_brat, Partition};
use argstruct::pipeline::{parse_corpus, train_models, PipelineConfig, Task};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn split() -> Partition {
    let docs = load_corpus_dir(&fixtures().join("essays")).unwrap();
    load_split(&fixtures().join("split.csv")).unwrap().partition(docs).unwrap()
}

#[test]
fn training_and_parsing_are_deterministic() {
    let p = split();
    let config = PipelineConfig::default();
    let a = train_models(&p.train, &config).unwrap();
    let b = train_models(&p.train, &config).unwrap();
    assert_eq!(a.classify, b.classify);
    assert_eq!(a.identify, b.identify);
    let pa = parse_corpus(&p.test, &a, &config).unwrap();
    let pb = parse_corpus(&p.test, &b, &config).unwrap();
    for (x, y) in pa.iter().zip(&pb) {
        assert_eq!(x.structure_json().unwrap(), y.structure_json().unwrap());
    }
}

#[test]
fn disabling_a_stage_scores_it_perfectly() {
    let p = split();
    let config = PipelineConfig { gold_components: true, stance: false, ..Default::default() };
    let models = train_models(&p.train, &config).unwrap();
    assert!(models.stance.is_none());
    let parsed = parse_corpus(&p.test, &models, &config).unwrap();
    let cm = argstruct::pipeline::parser_matrix(Task::Stance, &p.test, &parsed).unwrap();
    assert_eq!(Task::Stance.scores(&cm).f1, 1.0);
}

#[test]
fn command_line_trains_and_parses() {
    let dir = tempfile::tempdir().unwrap();
    let models = dir.path().join("models");
    let out = dir.path().join("parsed");
    let corpus = fixtures().join("essays");
    let split = fixtures().join("split.csv");
    let args = |extra: &[&str]| {
        let mut v = vec!["argstruct".to_string()];
        v.extend(extra.iter().map(|s| s.to_string()));
        v.extend(["--corpus".into(), corpus.display().to_string(), "--split".into(), split.display().to_string()]);
        v
    };
    assert_eq!(argstruct::cli::run(args(&["train", "--out", models.to_str().unwrap()])), 0);
    let parse = args(&["parse", "--models", models.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(argstruct::cli::run(parse.clone()), 0);

    let text = std::fs::read_to_string(corpus.join("essay004.txt")).unwrap();
    let ann = std::fs::read_to_string(out.join("essay004.ann")).unwrap();
    let doc = parse_brat("essay004", &text, &ann).unwrap();
    assert!(!doc.components.is_empty());
    assert!(argstruct::corpus::validate_document(&doc).is_empty());

    let first = std::fs::read(out.join("essay004.json")).unwrap();
    assert_eq!(argstruct::cli::run(parse), 0);
    assert_eq!(std::fs::read(out.join("essay004.json")).unwrap(), first);
    assert_eq!(argstruct::cli::run(args(&["parse", "--out", out.to_str().unwrap()])), 2);
}
