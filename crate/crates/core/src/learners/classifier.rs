use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{canonical_order, epoch_orders, Averaged, Interner, TrainConfig, MODEL_VERSION};
use crate::error::{Error, Result};
use crate::features::FeatureVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub epochs: usize,
    pub seed: u64,
    /// 1 = linear; 2 adds pairwise conjunctions of binary features.
    pub degree: u8,
    /// Conjunctions are formed among this many most frequent binary features.
    pub conjunction_base: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        let t = TrainConfig::default();
        ClassifierConfig { epochs: t.epochs, seed: t.seed, degree: 1, conjunction_base: 200 }
    }
}

/// Averaged multiclass margin perceptron with one bias per class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub version: u32,
    /// Sorted; index order is the tie-break order.
    pub classes: Vec<String>,
    pub degree: u8,
    pub conjunction_base: Vec<String>,
    pub weights: BTreeMap<String, Vec<f64>>,
    pub bias: Vec<f64>,
}

fn expand<'a>(x: &'a FeatureVector, degree: u8, base: &BTreeSet<&str>) -> Vec<(std::borrow::Cow<'a, str>, f64)> {
    let mut out: Vec<(std::borrow::Cow<'a, str>, f64)> = x.iter().map(|(k, v)| (k.into(), v)).collect();
    if degree >= 2 {
        let active: Vec<&str> = x.iter().filter(|(k, v)| *v == 1.0 && base.contains(k)).map(|(k, _)| k).collect();
        for (i, a) in active.iter().enumerate() {
            for b in &active[i + 1..] {
                out.push((format!("{a}&&{b}").into(), 1.0));
            }
        }
    }
    out
}

impl ClassifierModel {
    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == name)
    }

    /// Per-class scores for a feature vector.
    pub fn scores(&self, x: &FeatureVector) -> Vec<f64> {
        let base: BTreeSet<&str> = self.conjunction_base.iter().map(String::as_str).collect();
        let mut s = self.bias.clone();
        for (k, v) in expand(x, self.degree, &base) {
            if let Some(w) = self.weights.get(k.as_ref()) {
                for (sc, wc) in s.iter_mut().zip(w) {
                    *sc += v * wc;
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let m: ClassifierModel = serde_json::from_str(json)?;
        if m.version != MODEL_VERSION {
            return Err(Error::Model(format!("unsupported classifier version {}", m.version)));
        }
        Ok(m)
    }
}

const MARGIN: f64 = 1.0;

fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Predicted class index (ties to the lowest index) and per-class scores.
pub fn classify(model: &ClassifierModel, x: &FeatureVector) -> (usize, Vec<f64>) {
    let scores = model.scores(x);
    (argmax(&scores), scores)
}

pub fn train_classifier(data: &[(FeatureVector, String)], config: ClassifierConfig) -> Result<ClassifierModel> {
    let classes: Vec<String> = data.iter().map(|(_, c)| c.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    if classes.len() < 2 {
        return Err(Error::UndefinedInput(format!("classifier needs at least two classes, got {}", classes.len())));
    }
    let k = classes.len();
    let class_of: HashMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();

    let conjunction_base: Vec<String> = if config.degree >= 2 {
        let mut freq: HashMap<&str, usize> = HashMap::new();
        for (x, _) in data {
            for (key, v) in x.iter() {
                if v == 1.0 {
                    *freq.entry(key).or_default() += 1;
                }
            }
        }
        let mut ranked: Vec<(&str, usize)> = freq.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked.into_iter().take(config.conjunction_base).map(|(s, _)| s.to_string()).collect()
    } else {
        Vec::new()
    };
    let base: BTreeSet<&str> = conjunction_base.iter().map(String::as_str).collect();

    let keys: Vec<String> = data
        .iter()
        .map(|(x, c)| {
            let mut key = c.clone();
            for (f, v) in x.iter() {
                key.push_str(&format!("|{f}={v}"));
            }
            key
        })
        .collect();
    let canonical = canonical_order(&keys);
    let mut interner = Interner::default();
    let mut encoded: Vec<Vec<(usize, f64)>> = vec![Vec::new(); data.len()];
    for &i in &canonical {
        encoded[i] = expand(&data[i].0, config.degree, &base).into_iter().map(|(f, v)| (interner.intern(&f), v)).collect();
    }
    let nf = interner.names.len();
    let bias_at = |c: usize| nf * k + c;
    let mut params = Averaged::new(nf * k + k);

    for order in epoch_orders(&canonical, config.epochs, config.seed) {
        for i in order {
            let gold = class_of[data[i].1.as_str()];
            let mut scores: Vec<f64> = (0..k).map(|c| params.w[bias_at(c)]).collect();
            for &(f, v) in &encoded[i] {
                for (c, s) in scores.iter_mut().enumerate() {
                    *s += v * params.w[f * k + c];
                }
            }
            // Margin update against the best competing class.
            let rival = (0..k).filter(|&c| c != gold).fold(None, |best: Option<usize>, c| match best {
                Some(b) if scores[b] >= scores[c] => Some(b),
                _ => Some(c),
            });
            let pred = rival.unwrap_or(gold);
            if scores[gold] - scores[pred] < MARGIN {
                for &(f, v) in &encoded[i] {
                    params.update(f * k + gold, v);
                    params.update(f * k + pred, -v);
                }
                params.update(bias_at(gold), 1.0);
                params.update(bias_at(pred), -1.0);
            }
            params.step += 1;
        }
    }

    let w = params.averaged();
    let mut weights = BTreeMap::new();
    for (f, name) in interner.names.iter().enumerate() {
        let row = w[f * k..(f + 1) * k].to_vec();
        if row.iter().any(|&v| v != 0.0) {
            weights.insert(name.clone(), row);
        }
    }
    Ok(ClassifierModel {
        version: MODEL_VERSION,
        classes,
        degree: config.degree,
        conjunction_base,
        weights,
        bias: (0..k).map(|c| w[bias_at(c)]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(pairs: &[(&str, f64)]) -> FeatureVector {
        pairs.iter().copied().collect()
    }

    fn xor_data() -> Vec<(FeatureVector, String)> {
        vec![
            (fv(&[("b:x", 1.0), ("b:y", 1.0)]), "no".into()),
            (fv(&[("b:x", 1.0)]), "yes".into()),
            (fv(&[("b:y", 1.0)]), "yes".into()),
            (fv(&[]), "no".into()),
        ]
    }

    fn accuracy(model: &ClassifierModel, data: &[(FeatureVector, String)]) -> f64 {
        let hits = data.iter().filter(|(x, c)| model.classes[classify(model, x).0] == *c).count();
        hits as f64 / data.len() as f64
    }

    #[test]
    fn xor_needs_conjunctions() {
        let data = xor_data();
        let linear = train_classifier(&data, ClassifierConfig { degree: 1, ..Default::default() }).unwrap();
        let quad = train_classifier(&data, ClassifierConfig { degree: 2, ..Default::default() }).unwrap();
        assert!(accuracy(&linear, &data) < 1.0);
        assert_eq!(accuracy(&quad, &data), 1.0);
    }

    #[test]
    fn hand_computed_scores() {
        let model = ClassifierModel {
            version: MODEL_VERSION,
            classes: vec!["a".into(), "b".into()],
            degree: 1,
            conjunction_base: vec![],
            weights: [("f1".to_string(), vec![0.5, -1.0]), ("f2".to_string(), vec![2.0, 0.25]), ("f3".to_string(), vec![0.0, 3.0])]
                .into_iter()
                .collect(),
            bias: vec![0.1, -0.2],
        };
        // a: 0.1 + 2*0.5 + (-1)*2.0 + 0.5*0.0 = -0.9; b: -0.2 - 2.0 - 0.25 + 1.5 = -0.95.
        let (c, s) = classify(&model, &fv(&[("f1", 2.0), ("f2", -1.0), ("f3", 0.5)]));
        assert!((s[0] + 0.9).abs() < 1e-12 && (s[1] + 0.95).abs() < 1e-12);
        assert_eq!(c, 0);
        assert_eq!(classify(&model, &FeatureVector::new()).0, 0);
    }

    #[test]
    fn uninformative_features_give_majority() {
        let mut data: Vec<(FeatureVector, String)> = (0..18).map(|_| (fv(&[("c:1", 1.0)]), "major".into())).collect();
        data.extend((0..2).map(|_| (fv(&[("c:1", 1.0)]), "minor".into())));
        let model = train_classifier(&data, ClassifierConfig::default()).unwrap();
        assert_eq!(model.classes[classify(&model, &fv(&[("c:1", 1.0)])).0], "major");
    }

    #[test]
    fn single_class_is_an_error() {
        let data = vec![(fv(&[("a", 1.0)]), "x".to_string())];
        assert!(train_classifier(&data, ClassifierConfig::default()).is_err());
    }
}
