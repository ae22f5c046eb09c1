//! Confusion probability matrices for two or more raters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `matrix[r][c]`: probability that a rater picks `c` given another rater
/// picked `r` for the same markable. Rows of categories nobody used are all
/// zero and listed in `undefined_rows`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfusionProbabilityMatrix {
    pub categories: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub undefined_rows: Vec<usize>,
}

impl ConfusionProbabilityMatrix {
    pub fn get(&self, row: &str, col: &str) -> Option<f64> {
        let r = self.categories.iter().position(|c| c == row)?;
        let c = self.categories.iter().position(|c| c == col)?;
        Some(self.matrix[r][c])
    }
}

/// `labels[m][r]` is rater `r`'s category index for markable `m`. Counts
/// every ordered pair of distinct raters, then normalizes each row.
pub fn confusion_probability_matrix(labels: &[Vec<usize>], categories: &[&str]) -> Result<ConfusionProbabilityMatrix> {
    let k = categories.len();
    let mut counts = vec![vec![0u64; k]; k];
    for (m, row) in labels.iter().enumerate() {
        if row.len() < 2 {
            return Err(Error::UndefinedInput(format!("markable {m} has fewer than two ratings")));
        }
        for (a, &x) in row.iter().enumerate() {
            for (b, &y) in row.iter().enumerate() {
                if a == b {
                    continue;
                }
                if x >= k || y >= k {
                    return Err(Error::UndefinedInput(format!("markable {m}: label outside {k} categories")));
                }
                counts[x][y] += 1;
            }
        }
    }
    let mut undefined_rows = Vec::new();
    let matrix = counts
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let total: u64 = row.iter().sum();
            if total == 0 {
                undefined_rows.push(r);
                vec![0.0; k]
            } else {
                row.iter().map(|&c| c as f64 / total as f64).collect()
            }
        })
        .collect();
    Ok(ConfusionProbabilityMatrix { categories: categories.iter().map(|c| c.to_string()).collect(), matrix, undefined_rows })
}
