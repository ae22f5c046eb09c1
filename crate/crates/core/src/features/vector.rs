use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Sparse named features, keys of the form `group:detail`, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(BTreeMap<String, f64>);

impl FeatureVector {
    pub fn new() -> Self {
        FeatureVector(BTreeMap::new())
    }

    /// Sets a feature; zero values are not stored.
    pub fn set(&mut self, key: impl Into<String>, value: f64) {
        let key = key.into();
        if value == 0.0 {
            self.0.remove(&key);
        } else {
            self.0.insert(key, value);
        }
    }

    /// Sets a binary feature to 1.
    pub fn flag(&mut self, key: impl Into<String>) {
        self.0.insert(key.into(), 1.0);
    }

    pub fn add(&mut self, key: impl Into<String>, value: f64) {
        let key = key.into();
        let v = self.0.get(&key).copied().unwrap_or(0.0) + value;
        self.set(key, v);
    }

    pub fn get(&self, key: &str) -> f64 {
        self.0.get(key).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn extend(&mut self, other: FeatureVector) {
        for (k, v) in other.0 {
            self.add(k, v);
        }
    }

    /// Keeps only features whose group (text before the first `:`) passes `keep`.
    pub fn retain_groups(&mut self, keep: impl Fn(&str) -> bool) {
        self.0.retain(|k, _| keep(k.split(':').next().unwrap_or(k)));
    }
}

impl FromIterator<(String, f64)> for FeatureVector {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        let mut v = FeatureVector::new();
        for (k, x) in iter {
            v.add(k, x);
        }
        v
    }
}

impl<'a> FromIterator<(&'a str, f64)> for FeatureVector {
    fn from_iter<I: IntoIterator<Item = (&'a str, f64)>>(iter: I) -> Self {
        iter.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}
