use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{canonical_order, epoch_orders, Averaged, Interner, TrainConfig, MODEL_VERSION};
use crate::corpus::IobLabel;
use crate::error::{Error, Result};
use crate::features::FeatureVector;

const L: usize = 3;

/// First-order linear-chain model over IOB labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceModel {
    pub version: u32,
    pub labels: Vec<IobLabel>,
    /// Per feature, one weight per label in [`IobLabel::ALL`] order.
    pub emissions: BTreeMap<String, [f64; L]>,
    /// `transitions[prev][next]`.
    pub transitions: [[f64; L]; L],
    pub start: [f64; L],
}

impl SequenceModel {
    fn emission_scores(&self, x: &FeatureVector) -> [f64; L] {
        let mut s = [0.0; L];
        for (k, v) in x.iter() {
            if let Some(w) = self.emissions.get(k) {
                for y in 0..L {
                    s[y] += v * w[y];
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let m: SequenceModel = serde_json::from_str(json)?;
        if m.version != MODEL_VERSION {
            return Err(Error::Model(format!("unsupported sequence model version {}", m.version)));
        }
        Ok(m)
    }
}

/// Dense working copy used during training.
struct Dense<'a> {
    w: &'a [f64],
    n_features: usize,
}

impl Dense<'_> {
    fn emission(&self, x: &[(usize, f64)]) -> [f64; L] {
        let mut s = [0.0; L];
        for &(f, v) in x {
            for (y, sy) in s.iter_mut().enumerate() {
                *sy += v * self.w[f * L + y];
            }
        }
        s
    }

    fn trans(&self, a: usize, b: usize) -> f64 {
        self.w[self.n_features * L + a * L + b]
    }

    fn start(&self, y: usize) -> f64 {
        self.w[self.n_features * L + L * L + y]
    }
}

/// Highest-scoring path; among equal scores the lower label index wins at
/// every back-pointer and at the final position.
fn viterbi(emissions: &[[f64; L]], trans: impl Fn(usize, usize) -> f64, start: impl Fn(usize) -> f64) -> Vec<usize> {
    let n = emissions.len();
    if n == 0 {
        return Vec::new();
    }
    let mut delta = vec![[0.0; L]; n];
    let mut back = vec![[0usize; L]; n];
    for y in 0..L {
        delta[0][y] = start(y) + emissions[0][y];
    }
    for t in 1..n {
        for y in 0..L {
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0;
            for (p, &prev) in delta[t - 1].iter().enumerate() {
                let s = prev + trans(p, y);
                if s > best {
                    best = s;
                    arg = p;
                }
            }
            delta[t][y] = best + emissions[t][y];
            back[t][y] = arg;
        }
    }
    let mut y = 0;
    for c in 1..L {
        if delta[n - 1][c] > delta[n - 1][y] {
            y = c;
        }
    }
    let mut path = vec![0; n];
    for t in (0..n).rev() {
        path[t] = y;
        y = back[t][y];
    }
    path
}

fn sequence_key(x: &[FeatureVector], y: &[IobLabel]) -> String {
    let mut key = String::new();
    for (f, l) in x.iter().zip(y) {
        key.push_str(l.as_str());
        for (k, v) in f.iter() {
            key.push_str(&format!("|{k}={v}"));
        }
        key.push('\n');
    }
    key
}

pub fn train_sequence(data: &[(Vec<FeatureVector>, Vec<IobLabel>)], config: TrainConfig) -> Result<SequenceModel> {
    if data.is_empty() {
        return Err(Error::UndefinedInput("empty sequence training set".into()));
    }
    if let Some(i) = data.iter().position(|(x, y)| x.len() != y.len()) {
        return Err(Error::UndefinedInput(format!("sequence {i}: features and labels differ in length")));
    }
    let keys: Vec<String> = data.iter().map(|(x, y)| sequence_key(x, y)).collect();
    let canonical = canonical_order(&keys);
    let mut interner = Interner::default();
    let mut encoded: Vec<Vec<Vec<(usize, f64)>>> = vec![Vec::new(); data.len()];
    for &i in &canonical {
        encoded[i] = data[i].0.iter().map(|f| f.iter().map(|(k, v)| (interner.intern(k), v)).collect()).collect();
    }
    let gold: Vec<Vec<usize>> = data.iter().map(|(_, y)| y.iter().map(|l| l.index()).collect()).collect();
    let nf = interner.names.len();
    let trans_at = |a: usize, b: usize| nf * L + a * L + b;
    let start_at = |y: usize| nf * L + L * L + y;
    let mut params = Averaged::new(nf * L + L * L + L);

    for order in epoch_orders(&canonical, config.epochs, config.seed) {
        for i in order {
            let x = &encoded[i];
            let y = &gold[i];
            let pred = {
                let dense = Dense { w: &params.w, n_features: nf };
                // Loss-augmented: every wrong label gets a unit bonus, so a path is
                // only accepted once it beats each rival by its Hamming distance.
                let em: Vec<[f64; L]> = x
                    .iter()
                    .zip(y)
                    .map(|(t, &g)| {
                        let mut e = dense.emission(t);
                        for (c, v) in e.iter_mut().enumerate() {
                            if c != g {
                                *v += 1.0;
                            }
                        }
                        e
                    })
                    .collect();
                viterbi(&em, |a, b| dense.trans(a, b), |s| dense.start(s))
            };
            if pred != *y {
                for t in 0..x.len() {
                    if pred[t] != y[t] {
                        for &(f, v) in &x[t] {
                            params.update(f * L + y[t], v);
                            params.update(f * L + pred[t], -v);
                        }
                    }
                    let (gp, pp) = if t == 0 { (None, None) } else { (Some(y[t - 1]), Some(pred[t - 1])) };
                    if (gp, y[t]) != (pp, pred[t]) {
                        params.update(gp.map_or(start_at(y[t]), |g| trans_at(g, y[t])), 1.0);
                        params.update(pp.map_or(start_at(pred[t]), |p| trans_at(p, pred[t])), -1.0);
                    }
                }
            }
            params.step += 1;
        }
    }

    let w = params.averaged();
    let mut emissions = BTreeMap::new();
    for (f, name) in interner.names.iter().enumerate() {
        let row = [w[f * L], w[f * L + 1], w[f * L + 2]];
        if row.iter().any(|&v| v != 0.0) {
            emissions.insert(name.clone(), row);
        }
    }
    let mut transitions = [[0.0; L]; L];
    for (a, row) in transitions.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = w[trans_at(a, b)];
        }
    }
    let start = [w[start_at(0)], w[start_at(1)], w[start_at(2)]];
    Ok(SequenceModel { version: MODEL_VERSION, labels: IobLabel::ALL.to_vec(), emissions, transitions, start })
}

pub fn decode_sequence(model: &SequenceModel, features: &[FeatureVector]) -> Vec<IobLabel> {
    let em: Vec<[f64; L]> = features.iter().map(|x| model.emission_scores(x)).collect();
    viterbi(&em, |a, b| model.transitions[a][b], |y| model.start[y]).into_iter().map(|y| IobLabel::ALL[y]).collect()
}

/// Model score of a complete label path.
pub fn path_score(model: &SequenceModel, features: &[FeatureVector], labels: &[IobLabel]) -> f64 {
    let mut s = 0.0;
    for (t, (x, l)) in features.iter().zip(labels).enumerate() {
        s += model.emission_scores(x)[l.index()];
        s += if t == 0 { model.start[l.index()] } else { model.transitions[labels[t - 1].index()][l.index()] };
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use IobLabel::*;

    fn fv(keys: &[&str]) -> FeatureVector {
        keys.iter().map(|k| (*k, 1.0)).collect()
    }

    #[test]
    fn memorizes_a_single_sequence() {
        let x = vec![fv(&["w:a"]), fv(&["w:b"]), fv(&["w:c"]), fv(&["w:d"])];
        let y = vec![O, ArgB, ArgI, O];
        let model = train_sequence(&[(x.clone(), y.clone())], TrainConfig::default()).unwrap();
        assert_eq!(decode_sequence(&model, &x), y);
    }

    #[test]
    fn zero_features_follow_transition_priors() {
        let mut model = train_sequence(&[(vec![fv(&["w:a"])], vec![O])], TrainConfig::default()).unwrap();
        model.start = [0.0, 0.0, 1.0];
        model.transitions = [[0.0, 2.0, 0.0], [0.0, 0.0, 0.5], [1.0, 0.0, 0.0]];
        let empty = vec![FeatureVector::new(); 4];
        assert_eq!(decode_sequence(&model, &empty), vec![O, ArgB, ArgI, O]);
    }

    #[test]
    fn empty_training_set_is_an_error() {
        assert!(train_sequence(&[], TrainConfig::default()).is_err());
        assert!(train_sequence(&[(vec![fv(&["a"])], vec![])], TrainConfig::default()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = vec![fv(&["w:a"]), fv(&["w:b"])];
        let model = train_sequence(&[(x, vec![ArgB, ArgI])], TrainConfig::default()).unwrap();
        assert_eq!(SequenceModel::from_json(&model.to_json().unwrap()).unwrap(), model);
    }
}
