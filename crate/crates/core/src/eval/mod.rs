//! Scoring: confusion matrices, macro-averaged P/R/F1, essay-level
//! cross-validation with accumulated matrices, McNemar's test and the
//! base-classifier improvement simulation.

mod simulation;

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};

pub use simulation::{curve_csv, improvement_simulation, oracle_scores, plain_scores, SimParagraph, SimPoint, SimTarget};

/// Gold labels index rows, predictions index columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Self {
        let k = labels.len();
        ConfusionMatrix { labels: labels.iter().map(|s| s.as_ref().to_string()).collect(), counts: vec![vec![0; k]; k] }
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn add(&mut self, gold: &str, predicted: &str) -> Result<()> {
        let (Some(g), Some(p)) = (self.index(gold), self.index(predicted)) else {
            return Err(Error::Contract(format!("label `{gold}` or `{predicted}` not in {:?}", self.labels)));
        };
        self.counts[g][p] += 1;
        Ok(())
    }

    pub fn add_index(&mut self, gold: usize, predicted: usize) {
        self.counts[gold][predicted] += 1;
    }

    pub fn from_pairs<S: AsRef<str>>(labels: &[S], pairs: impl IntoIterator<Item = (S, S)>) -> Result<Self> {
        let mut cm = ConfusionMatrix::new(labels);
        for (g, p) in pairs {
            cm.add(g.as_ref(), p.as_ref())?;
        }
        Ok(cm)
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::Contract(format!("cannot add matrices over {:?} and {:?}", self.labels, other.labels)));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn accuracy(&self) -> f64 {
        let diag: u64 = (0..self.labels.len()).map(|i| self.counts[i][i]).sum();
        ratio(diag as f64, self.total() as f64)
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

fn f1(p: f64, r: f64) -> f64 {
    ratio(2.0 * p * r, p + r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MacroScores {
    pub precision: f64,
    pub recall: f64,
    /// Unweighted mean of the per-class F1 scores.
    pub f1: f64,
    /// Harmonic mean of macro precision and macro recall.
    pub f1_harmonic: f64,
    pub per_class: Vec<ClassScores>,
}

impl MacroScores {
    pub fn class_f1(&self, label: &str) -> Option<f64> {
        self.per_class.iter().find(|c| c.label == label).map(|c| c.f1)
    }
}

/// Per-class precision, recall and F1 (0 when undefined) and their
/// unweighted means.
pub fn macro_prf(cm: &ConfusionMatrix) -> MacroScores {
    macro_prf_over(cm, cm.labels.len())
}

/// Like [`macro_prf`] but scoring and averaging only the first `k` labels;
/// later labels still count as errors against them.
pub fn macro_prf_over(cm: &ConfusionMatrix, k: usize) -> MacroScores {
    let all = cm.labels.len();
    let k = k.min(all);
    let per_class: Vec<ClassScores> = (0..k)
        .map(|c| {
            let tp = cm.counts[c][c] as f64;
            let predicted: u64 = (0..all).map(|g| cm.counts[g][c]).sum();
            let support: u64 = cm.counts[c].iter().sum();
            let precision = ratio(tp, predicted as f64);
            let recall = ratio(tp, support as f64);
            ClassScores { label: cm.labels[c].clone(), precision, recall, f1: f1(precision, recall), support }
        })
        .collect();
    let mean = |f: fn(&ClassScores) -> f64| ratio(per_class.iter().map(f).sum(), k as f64);
    let precision = mean(|c| c.precision);
    let recall = mean(|c| c.recall);
    MacroScores { precision, recall, f1: mean(|c| c.f1), f1_harmonic: f1(precision, recall), per_class }
}

/// CSV rows `task,class,precision,recall,f1`; the macro row has class `macro`.
pub fn scores_csv(rows: &[(String, MacroScores)]) -> String {
    let mut out = String::from("task,class,precision,recall,f1\n");
    for (task, s) in rows {
        let _ = writeln!(out, "{task},macro,{:.4},{:.4},{:.4}", s.precision, s.recall, s.f1);
        for c in &s.per_class {
            let _ = writeln!(out, "{task},{},{:.4},{:.4},{:.4}", c.label, c.precision, c.recall, c.f1);
        }
    }
    out
}

/// Per instance: whether classifier A and classifier B were correct.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedOutcomes {
    pub outcomes: Vec<(bool, bool)>,
}

impl PairedOutcomes {
    pub fn from_predictions<T: PartialEq>(gold: &[T], a: &[T], b: &[T]) -> Result<Self> {
        if gold.len() != a.len() || gold.len() != b.len() {
            return Err(Error::Contract(format!("{} gold, {} and {} predictions", gold.len(), a.len(), b.len())));
        }
        Ok(PairedOutcomes { outcomes: gold.iter().zip(a).zip(b).map(|((g, x), y)| (x == g, y == g)).collect() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McNemar {
    /// A correct, B wrong.
    pub b: u64,
    /// A wrong, B correct.
    pub c: u64,
    pub statistic: f64,
    pub significant: bool,
}

/// Chi-square with one degree of freedom at p = .05.
pub const CHI2_05: f64 = 3.841;

/// Continuity-corrected McNemar statistic `(|b - c| - 1)^2 / (b + c)`.
pub fn mcnemar(paired: &PairedOutcomes) -> McNemar {
    let b = paired.outcomes.iter().filter(|&&(x, y)| x && !y).count() as u64;
    let c = paired.outcomes.iter().filter(|&&(x, y)| !x && y).count() as u64;
    if b + c == 0 {
        return McNemar { b, c, statistic: 0.0, significant: false };
    }
    let d = (b.abs_diff(c) as f64 - 1.0).max(0.0);
    let statistic = d * d / (b + c) as f64;
    McNemar { b, c, statistic, significant: statistic > CHI2_05 }
}

/// Essay indices per fold: a seeded shuffle dealt round-robin.
pub fn fold_assignment(n: usize, folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 || folds > n {
        return Err(Error::Config(format!("cannot split {n} essays into {folds} folds")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut out = vec![Vec::new(); folds];
    for (k, i) in order.into_iter().enumerate() {
        out[k % folds].push(i);
    }
    for f in &mut out {
        f.sort_unstable();
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub folds: Vec<Vec<String>>,
    pub matrix: ConfusionMatrix,
    pub scores: MacroScores,
}

/// Runs `evaluate(train, test)` on every fold and sums the fold matrices
/// before scoring once.
pub fn cross_validate<F>(docs: &[Document], folds: usize, seed: u64, evaluate: F) -> Result<CrossValidation>
where
    F: Fn(&[Document], &[Document]) -> Result<ConfusionMatrix> + Sync,
{
    let assignment = fold_assignment(docs.len(), folds, seed)?;
    let matrices: Vec<ConfusionMatrix> = assignment
        .par_iter()
        .map(|test_idx| {
            let test: Vec<Document> = test_idx.iter().map(|&i| docs[i].clone()).collect();
            let train: Vec<Document> =
                (0..docs.len()).filter(|i| test_idx.binary_search(i).is_err()).map(|i| docs[i].clone()).collect();
            evaluate(&train, &test)
        })
        .collect::<Result<_>>()?;
    let mut matrix = matrices[0].clone();
    for m in &matrices[1..] {
        matrix.merge(m)?;
    }
    let scores = macro_prf(&matrix);
    let folds = assignment.iter().map(|f| f.iter().map(|&i| docs[i].essay_id.clone()).collect()).collect();
    Ok(CrossValidation { folds, matrix, scores })
}

/// Scores averaged over all rater pairs, each pair scored once with the
/// first rater as gold standard.
pub fn pairwise_average<S: AsRef<str>>(labels: &[S], raters: &[Vec<String>]) -> Result<MacroScores> {
    if raters.len() < 2 {
        return Err(Error::UndefinedInput("pairwise scores need at least two raters".into()));
    }
    let mut all = Vec::new();
    for i in 0..raters.len() {
        for j in i + 1..raters.len() {
            if raters[i].len() != raters[j].len() {
                return Err(Error::Contract("rater sequences differ in length".into()));
            }
            let mut cm = ConfusionMatrix::new(labels);
            for (g, p) in raters[i].iter().zip(&raters[j]) {
                cm.add(g, p)?;
            }
            all.push(macro_prf(&cm));
        }
    }
    let n = all.len() as f64;
    let avg = |f: &dyn Fn(&MacroScores) -> f64| all.iter().map(f).sum::<f64>() / n;
    let per_class = (0..labels.len())
        .map(|c| ClassScores {
            label: labels[c].as_ref().to_string(),
            precision: avg(&|s| s.per_class[c].precision),
            recall: avg(&|s| s.per_class[c].recall),
            f1: avg(&|s| s.per_class[c].f1),
            support: all[0].per_class[c].support,
        })
        .collect();
    Ok(MacroScores {
        precision: avg(&|s| s.precision),
        recall: avg(&|s| s.recall),
        f1: avg(&|s| s.f1),
        f1_harmonic: avg(&|s| s.f1_harmonic),
        per_class,
    })
}
