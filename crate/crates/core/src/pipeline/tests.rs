use super::*;
use crate::corpus::{parse_brat, validate_document};
use crate::learners::ClassifierModel;

const TEXT: &str = "Title\n\nSome intro here.\nCars help people. Cars are fast. Cars are cheap.\nEnd here.\n";

fn doc() -> Document {
    let mut ann = String::new();
    for (k, s) in ["Cars help people", "Cars are fast", "Cars are cheap"].iter().enumerate() {
        let start = TEXT.find(s).unwrap();
        let t = if k == 0 { "Claim" } else { "Premise" };
        ann += &format!("T{}\t{t} {start} {}\t{s}\n", k + 1, start + s.len());
    }
    ann += "R1\tattacks Arg1:T2 Arg2:T1\t\nR2\tsupports Arg1:T3 Arg2:T1\t\nA1\tStance T1 For\n";
    parse_brat("e", TEXT, &ann).unwrap()
}

/// Scores one feature per class on top of a per-class bias.
fn rule(classes: &[&str], feature: &str, weights: Vec<f64>, bias: Vec<f64>) -> ClassifierModel {
    ClassifierModel {
        version: 1,
        classes: classes.iter().map(|c| c.to_string()).collect(),
        degree: 1,
        conjunction_base: Vec::new(),
        weights: [(feature.to_string(), weights)].into(),
        bias,
    }
}

fn hand_models() -> Models {
    Models {
        classify: Some(rule(&["Claim", "Premise"], "struct:first_in_para", vec![2.0, 0.0], vec![0.0, 1.0])),
        relations: Some(rule(&["Linked", "Not-Linked"], "struct:tgt_first", vec![2.0, 0.0], vec![0.0, 1.0])),
        stance: Some(rule(&["Attack", "Support"], "lex:fast", vec![2.0, 0.0], vec![0.0, 1.0])),
        ..Default::default()
    }
}

fn gold_config() -> PipelineConfig {
    PipelineConfig { gold_components: true, ..Default::default() }
}

type Structure = (Vec<(String, ComponentType, Option<Stance>)>, BTreeSet<(String, String, RelationType)>);

fn structure(d: &Document) -> Structure {
    (
        d.components.iter().map(|c| (c.id.clone(), c.ctype, c.stance)).collect(),
        d.relations.iter().map(|r| (r.source.clone(), r.target.clone(), r.rtype)).collect(),
    )
}

#[test]
fn hand_traced_run() {
    // Types: T1 opens the paragraph, so Claim; T2, T3 Premise. Relations:
    // pairs whose target opens the paragraph, T2->T1 and T3->T1. Claim
    // scores (1, 1/4, 1/4) give w(T2,T1) = w(T3,T1) = .5 + .25 * .75 + .25,
    // and the best forest keeps both edges. Only T2 contains "fast".
    let parsed = run_pipeline(&doc(), &hand_models(), &gold_config()).unwrap();
    let (components, relations) = structure(&parsed.document);
    assert_eq!(
        components,
        [
            ("T1".to_string(), ComponentType::Claim, Some(Stance::For)),
            ("T2".to_string(), ComponentType::Premise, None),
            ("T3".to_string(), ComponentType::Premise, None),
        ]
    );
    let want: BTreeSet<_> = [
        ("T2".to_string(), "T1".to_string(), RelationType::Attack),
        ("T3".to_string(), "T1".to_string(), RelationType::Support),
    ]
    .into();
    assert_eq!(relations, want);
    assert_eq!(parsed.base_relations, [(1, 0), (2, 0)]);
    assert!(validate_document(&parsed.document).is_empty());
    assert_eq!(parsed.provenance.len(), 5);
}

#[test]
fn oracle_mode_reproduces_gold() {
    let gold = doc();
    let config = PipelineConfig {
        gold_components: true,
        classify: false,
        relations: false,
        joint: false,
        stance: false,
        ..Default::default()
    };
    let parsed = run_pipeline(&gold, &Models::default(), &config).unwrap();
    assert_eq!(structure(&parsed.document), structure(&gold));
    for task in [Task::Classify, Task::Relations, Task::Stance] {
        assert_eq!(predicted_labels(task, &gold, &parsed), gold_labels(task, &gold), "{task}");
    }
}

#[test]
fn lone_component_becomes_a_claim() {
    let text = "Title\n\nOnly one sentence.\n";
    let d = parse_brat("e", text, "T1\tPremise 7 25\tOnly one sentence\n").unwrap();
    let config = PipelineConfig { gold_components: true, classify: false, relations: false, stance: false, ..Default::default() };
    let parsed = run_pipeline(&d, &Models::default(), &config).unwrap();
    assert_eq!(parsed.document.components[0].ctype, ComponentType::Claim);
}

#[test]
fn enabled_stage_without_model_is_a_config_error() {
    let err = run_pipeline(&doc(), &Models::default(), &gold_config()).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
    let err = run_pipeline(&doc(), &Models::default(), &PipelineConfig::default()).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}

#[test]
fn config_round_trips_through_toml() {
    let c = PipelineConfig::short_text();
    assert_eq!(PipelineConfig::from_toml(&c.to_toml().unwrap()).unwrap(), c);
    let partial = PipelineConfig::from_toml("gold_components = true\n[phi]\nr = 1.0\ncr = 0.0\nc = 0.0\n").unwrap();
    assert!(partial.gold_components && partial.joint);
    assert!(partial.disabled.relations.contains("lex"));
    assert!(PipelineConfig::from_toml("[phi]\nr = -1.0\ncr = 0.0\nc = 0.0\n").is_err());
}

#[test]
fn models_round_trip_through_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    let m = hand_models();
    m.save(dir.path()).unwrap();
    let back = Models::load(dir.path()).unwrap();
    assert_eq!(back.classify, m.classify);
    assert!(back.identify.is_none());
    let a = run_pipeline(&doc(), &m, &gold_config()).unwrap();
    let b = run_pipeline(&doc(), &back, &gold_config()).unwrap();
    assert_eq!(a.structure_json().unwrap(), b.structure_json().unwrap());
}
