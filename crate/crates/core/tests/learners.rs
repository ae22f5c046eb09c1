//! Learner sanity checks: separable data, exhaustive decoding oracle,
//! determinism.

use argstruct::corpus::IobLabel;
use argstruct::features::FeatureVector;
use argstruct::learners::{
    classify, decode_sequence, path_score, train_classifier, train_sequence, ClassifierConfig, SequenceModel,
    TrainConfig,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use IobLabel::*;

fn fv(keys: &[String]) -> FeatureVector {
    keys.iter().map(|k| (k.clone(), 1.0)).collect()
}

/// Random IOB sequences whose tokens carry a label-revealing feature plus noise.
fn separable(rng: &mut ChaCha8Rng, n: usize) -> Vec<(Vec<FeatureVector>, Vec<IobLabel>)> {
    (0..n)
        .map(|_| {
            let len = rng.gen_range(3..15);
            let mut labels = Vec::with_capacity(len);
            for t in 0..len {
                let l = match rng.gen_range(0..3) {
                    0 => ArgB,
                    1 if t > 0 && labels[t - 1] != O => ArgI,
                    _ => O,
                };
                labels.push(l);
            }
            let feats = labels
                .iter()
                .map(|l| fv(&[format!("tag:{l}"), format!("noise:{}", rng.gen_range(0..20))]))
                .collect();
            (feats, labels)
        })
        .collect()
}

#[test]
fn separable_iob_is_learned_within_five_epochs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let data = separable(&mut rng, 60);
    let model = train_sequence(&data, TrainConfig { epochs: 5, seed: 3 }).unwrap();
    for (x, y) in &data {
        assert_eq!(&decode_sequence(&model, x), y);
    }
}

fn all_paths(len: usize) -> Vec<Vec<IobLabel>> {
    let mut paths = vec![Vec::new()];
    for _ in 0..len {
        paths = paths.into_iter().flat_map(|p| IobLabel::ALL.map(|l| [p.clone(), vec![l]].concat())).collect();
    }
    paths
}

#[test]
fn viterbi_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let base = train_sequence(&separable(&mut rng, 2), TrainConfig::default()).unwrap();
    for trial in 0..500 {
        let mut model: SequenceModel = base.clone();
        model.emissions = (0..6).map(|f| (format!("f{f}"), [0; 3].map(|_| rng.gen_range(-2.0..2.0)))).collect();
        model.transitions = [[0.0; 3]; 3].map(|r| r.map(|_: f64| rng.gen_range(-2.0..2.0)));
        model.start = [0.0; 3].map(|_: f64| rng.gen_range(-1.0..1.0));
        let len = rng.gen_range(1..=8);
        let x: Vec<FeatureVector> = (0..len)
            .map(|_| {
                let active: Vec<usize> = (0..6).filter(|_| rng.gen_bool(0.4)).collect();
                active.into_iter().map(|f| (format!("f{f}"), rng.gen_range(0.5..1.5))).collect()
            })
            .collect();
        let decoded = decode_sequence(&model, &x);
        let best = all_paths(len).iter().map(|p| path_score(&model, &x, p)).fold(f64::NEG_INFINITY, f64::max);
        let got = path_score(&model, &x, &decoded);
        assert!((got - best).abs() < 1e-9, "trial {trial}: {got} vs {best}");
    }
}

#[test]
fn sequence_training_is_order_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let data = separable(&mut rng, 30);
    let mut shuffled = data.clone();
    shuffled.shuffle(&mut rng);
    let cfg = TrainConfig { epochs: 3, seed: 9 };
    assert_eq!(train_sequence(&data, cfg).unwrap(), train_sequence(&shuffled, cfg).unwrap());
}

#[test]
fn classifier_training_is_deterministic_and_order_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let data: Vec<(FeatureVector, String)> = (0..80)
        .map(|_| {
            let c = rng.gen_range(0..3);
            (fv(&[format!("cls:{c}"), format!("n:{}", rng.gen_range(0..10))]), format!("c{c}"))
        })
        .collect();
    let mut shuffled = data.clone();
    shuffled.shuffle(&mut rng);
    let cfg = ClassifierConfig { degree: 2, ..Default::default() };
    let a = train_classifier(&data, cfg).unwrap();
    let b = train_classifier(&shuffled, cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    for (x, c) in &data {
        assert_eq!(&a.classes[classify(&a, x).0], c);
    }
}
