//! Inter-annotator agreement: observed agreement, Fleiss' kappa, unitized
//! Krippendorff's alpha and confusion probability matrices.

mod cpm;
mod markables;
mod unitized;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cpm::{confusion_probability_matrix, ConfusionProbabilityMatrix};
pub use markables::{
    agreement_report, component_continua, component_label_sequences, relation_label_sequences, relation_table,
    sentence_presence_table, stance_table, AgreementRow, COMPONENT_CATEGORIES, RELATION_CATEGORIES,
};
pub use unitized::{joint_alpha_u, krippendorff_alpha_u, unitized_disagreement, Continuum, Unit};

/// Category counts per markable: `counts[i][j]` raters put markable `i` in
/// category `j`. Every row sums to the number of raters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementTable {
    pub counts: Vec<Vec<usize>>,
}

impl AgreementTable {
    pub fn new(counts: Vec<Vec<usize>>) -> Result<Self> {
        let table = AgreementTable { counts };
        table.raters()?;
        Ok(table)
    }

    /// Builds a table from per-markable rater labels (category indices).
    pub fn from_labels(labels: &[Vec<usize>], categories: usize) -> Result<Self> {
        let counts = labels
            .iter()
            .map(|row| {
                let mut c = vec![0; categories];
                for &l in row {
                    if l >= categories {
                        return Err(Error::UndefinedInput(format!("label {l} outside {categories} categories")));
                    }
                    c[l] += 1;
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        AgreementTable::new(counts)
    }

    pub fn markables(&self) -> usize {
        self.counts.len()
    }

    pub fn categories(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    /// Number of raters per markable; errors when rows disagree.
    pub fn raters(&self) -> Result<usize> {
        let Some(first) = self.counts.first() else { return Ok(0) };
        let n: usize = first.iter().sum();
        let k = first.len();
        for (i, row) in self.counts.iter().enumerate() {
            if row.len() != k || row.iter().sum::<usize>() != n {
                return Err(Error::UndefinedInput(format!("markable {i} does not have {n} ratings over {k} categories")));
            }
        }
        Ok(n)
    }
}

fn checked_raters(table: &AgreementTable) -> Result<usize> {
    if table.markables() == 0 {
        return Err(Error::UndefinedInput("agreement table has no markables".into()));
    }
    let n = table.raters()?;
    if n < 2 {
        return Err(Error::UndefinedInput(format!("need at least 2 ratings per markable, got {n}")));
    }
    Ok(n)
}

/// Mean over markables of the proportion of agreeing rater pairs.
pub fn observed_agreement(table: &AgreementTable) -> Result<f64> {
    let n = checked_raters(table)? as f64;
    let total: f64 = table
        .counts
        .iter()
        .map(|row| row.iter().map(|&c| (c * c.saturating_sub(1)) as f64).sum::<f64>() / (n * (n - 1.0)))
        .sum();
    Ok(total / table.markables() as f64)
}

/// Agreement expected by chance: sum of squared category proportions.
pub fn chance_agreement(table: &AgreementTable) -> Result<f64> {
    let n = checked_raters(table)? as f64;
    let denom = n * table.markables() as f64;
    Ok((0..table.categories())
        .map(|j| {
            let p = table.counts.iter().map(|row| row[j]).sum::<usize>() as f64 / denom;
            p * p
        })
        .sum())
}

pub fn fleiss_kappa(table: &AgreementTable) -> Result<f64> {
    let p_bar = observed_agreement(table)?;
    let p_e = chance_agreement(table)?;
    if (1.0 - p_e).abs() < 1e-15 {
        return Err(Error::Degenerate("all ratings fall into one category".into()));
    }
    Ok((p_bar - p_e) / (1.0 - p_e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(rows: &[&[usize]]) -> AgreementTable {
        AgreementTable::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn identical_raters_agree_fully() {
        let t = table(&[&[2, 0], &[0, 2], &[2, 0]]);
        assert_eq!(observed_agreement(&t).unwrap(), 1.0);
        assert_eq!(fleiss_kappa(&t).unwrap(), 1.0);
    }

    #[test]
    fn two_raters_agree_on_three_of_four() {
        let t = AgreementTable::from_labels(&[vec![0, 0], vec![1, 1], vec![0, 1], vec![1, 1]], 2).unwrap();
        assert_eq!(observed_agreement(&t).unwrap(), 0.75);
    }

    #[test]
    fn three_rater_toy_table() {
        // By hand: P_i = 1, 1/3, 1/3, 1, 1 -> mean 11/15; p = (9/15, 6/15) -> Pe = 13/25;
        // kappa = (11/15 - 13/25) / (12/25) = 4/9.
        let t = table(&[&[3, 0], &[2, 1], &[1, 2], &[0, 3], &[3, 0]]);
        assert!((observed_agreement(&t).unwrap() - 11.0 / 15.0).abs() < 1e-12);
        assert!((chance_agreement(&t).unwrap() - 13.0 / 25.0).abs() < 1e-12);
        assert!((fleiss_kappa(&t).unwrap() - 4.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(observed_agreement(&AgreementTable { counts: vec![] }), Err(Error::UndefinedInput(_))));
        assert!(matches!(fleiss_kappa(&table(&[&[3, 0], &[3, 0]])), Err(Error::Degenerate(_))));
        assert!(AgreementTable::new(vec![vec![2, 0], vec![1, 0]]).is_err());
    }

    proptest! {
        #[test]
        fn kappa_sign_follows_observed_minus_chance(
            rows in proptest::collection::vec(proptest::collection::vec(0usize..3, 3), 1..30)
        ) {
            let t = AgreementTable::from_labels(&rows, 3).unwrap();
            let po = observed_agreement(&t).unwrap();
            let pe = chance_agreement(&t).unwrap();
            if let Ok(k) = fleiss_kappa(&t) {
                prop_assert!((-1.0..=1.0 + 1e-12).contains(&k));
                prop_assert_eq!(k >= -1e-12, po >= pe - 1e-12);
                let unanimous = t.counts.iter().all(|r| r.contains(&3));
                prop_assert_eq!((k - 1.0).abs() < 1e-12, unanimous);
            }
        }
    }
}
