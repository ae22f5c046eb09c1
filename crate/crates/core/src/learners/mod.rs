//! Averaged-perceptron learners over sparse named features: a first-order
//! sequence labeler and a multiclass linear classifier.
//!
//! Training is deterministic and independent of the order in which instances
//! are supplied: instances are first put in a canonical order by content
//! hash, then shuffled once per epoch with a seeded generator.

mod classifier;
mod sequence;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use classifier::{classify, train_classifier, ClassifierConfig, ClassifierModel};
pub use sequence::{decode_sequence, path_score, train_sequence, SequenceModel};

pub(crate) const MODEL_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { epochs: 10, seed: 1 }
    }
}

/// 64-bit FNV-1a.
pub(crate) fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Instance indices sorted by content hash (ties by the key itself).
pub(crate) fn canonical_order(keys: &[String]) -> Vec<usize> {
    let hashes: Vec<u64> = keys.iter().map(|k| fnv1a(k.bytes())).collect();
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| hashes[a].cmp(&hashes[b]).then_with(|| keys[a].cmp(&keys[b])));
    order
}

/// Visiting order for each epoch.
pub(crate) fn epoch_orders(canonical: &[usize], epochs: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..epochs)
        .map(|_| {
            let mut order = canonical.to_vec();
            order.shuffle(&mut rng);
            order
        })
        .collect()
}

/// Maps feature names to dense indices in first-seen order.
#[derive(Default)]
pub(crate) struct Interner {
    pub index: HashMap<String, usize>,
    pub names: Vec<String>,
}

impl Interner {
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.index.insert(name.to_string(), i);
        self.names.push(name.to_string());
        i
    }
}

/// Perceptron weights with Collins-style averaging: the final weights are the
/// mean of the weight vector after every processed instance.
pub(crate) struct Averaged {
    pub w: Vec<f64>,
    acc: Vec<f64>,
    /// Instances processed before the current one.
    pub step: usize,
}

impl Averaged {
    pub fn new(n: usize) -> Self {
        Averaged { w: vec![0.0; n], acc: vec![0.0; n], step: 0 }
    }

    pub fn update(&mut self, i: usize, delta: f64) {
        self.w[i] += delta;
        self.acc[i] += self.step as f64 * delta;
    }

    pub fn averaged(&self) -> Vec<f64> {
        if self.step == 0 {
            return self.w.clone();
        }
        let t = self.step as f64;
        self.w.iter().zip(&self.acc).map(|(w, a)| w - a / t).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn averaging_equals_snapshot_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = 4;
            let mut params = Averaged::new(n);
            let mut current = vec![0.0; n];
            let mut snapshot_sum = vec![0.0; n];
            let instances = rng.gen_range(1..30);
            for _ in 0..instances {
                for _ in 0..rng.gen_range(0..3) {
                    let i = rng.gen_range(0..n);
                    let d: f64 = rng.gen_range(-2.0..2.0);
                    params.update(i, d);
                    current[i] += d;
                }
                params.step += 1;
                for (s, c) in snapshot_sum.iter_mut().zip(&current) {
                    *s += c;
                }
            }
            let avg = params.averaged();
            for (a, s) in avg.iter().zip(&snapshot_sum) {
                assert!((a - s / instances as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn canonical_order_ignores_input_order() {
        let keys: Vec<String> = ["b", "a", "c", "a"].iter().map(|s| s.to_string()).collect();
        let order: Vec<&str> = canonical_order(&keys).into_iter().map(|i| keys[i].as_str()).collect();
        let mut rev = keys.clone();
        rev.reverse();
        let order_rev: Vec<&str> = canonical_order(&rev).into_iter().map(|i| rev[i].as_str()).collect();
        assert_eq!(order, order_rev);
    }
}
