//! Artificially improved base classifiers: a growing share of the wrong type
//! and relation predictions is replaced by the gold label before tree
//! inference is rerun.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{macro_prf, ConfusionMatrix};
use crate::corpus::ComponentType;
use crate::error::{Error, Result};
use crate::joint::{infer_paragraph, Phi, RelationAdjacency};

/// Claims and premises of one paragraph with gold and base predictions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParagraph {
    pub gold_types: Vec<ComponentType>,
    pub gold_relations: RelationAdjacency,
    pub base_types: Vec<ComponentType>,
    pub base_relations: RelationAdjacency,
}

impl SimParagraph {
    fn check(&self) -> Result<()> {
        let n = self.gold_types.len();
        let square = |r: &RelationAdjacency| r.len() == n && r.iter().all(|row| row.len() == n);
        if self.base_types.len() != n || !square(&self.gold_relations) || !square(&self.base_relations) {
            return Err(Error::Contract("simulation paragraph has mismatched sizes".into()));
        }
        if self.gold_types.iter().chain(&self.base_types).any(|t| *t == ComponentType::MajorClaim) {
            return Err(Error::Contract("major claims do not take part in the simulation".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimTarget {
    Types,
    Relations,
    Both,
}

impl std::str::FromStr for SimTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "types" => Ok(SimTarget::Types),
            "relations" => Ok(SimTarget::Relations),
            "both" => Ok(SimTarget::Both),
            _ => Err(Error::Config(format!("unknown simulation target `{s}` (types, relations, both)"))),
        }
    }
}

/// Mean macro F1 of the joint model's types and relations at one fraction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub fraction: f64,
    pub type_f1: f64,
    pub relation_f1: f64,
}

#[derive(Clone, Copy)]
enum Slot {
    Type(usize, usize),
    Relation(usize, usize, usize),
}

fn errors(paragraphs: &[SimParagraph], target: SimTarget) -> Vec<Slot> {
    let mut out = Vec::new();
    for (p, para) in paragraphs.iter().enumerate() {
        if target != SimTarget::Relations {
            for i in 0..para.gold_types.len() {
                if para.base_types[i] != para.gold_types[i] {
                    out.push(Slot::Type(p, i));
                }
            }
        }
        if target != SimTarget::Types {
            for i in 0..para.gold_types.len() {
                for j in 0..para.gold_types.len() {
                    if i != j && para.base_relations[i][j] != para.gold_relations[i][j] {
                        out.push(Slot::Relation(p, i, j));
                    }
                }
            }
        }
    }
    out
}

/// Joint-model type and relation macro F1 for the given inputs.
fn score(paragraphs: &[SimParagraph], inputs: &[(Vec<ComponentType>, RelationAdjacency)], phi: Phi) -> Result<(f64, f64)> {
    let mut types = ConfusionMatrix::new(&["Claim", "Premise"]);
    let mut rels = ConfusionMatrix::new(&["Linked", "Not-Linked"]);
    for (para, (t, r)) in paragraphs.iter().zip(inputs) {
        let (solution, predicted, _) = infer_paragraph(r, t, phi)?;
        for (g, p) in para.gold_types.iter().zip(&predicted) {
            types.add(g.as_str(), p.as_str())?;
        }
        let n = t.len();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let label = |b: bool| if b { 1 } else { 0 };
                    rels.add_index(1 - label(para.gold_relations[i][j]), 1 - label(solution.x[i][j]));
                }
            }
        }
    }
    Ok((macro_prf(&types).f1, macro_prf(&rels).f1))
}

/// For each fraction `f` and each repeat, corrects the first `round(f * e)`
/// of the `e` wrong predictions in a per-repeat random order and reruns tree
/// inference. Corrections at a larger fraction include those at a smaller one.
pub fn improvement_simulation(
    paragraphs: &[SimParagraph],
    fractions: &[f64],
    target: SimTarget,
    repeats: usize,
    seed: u64,
    phi: Phi,
) -> Result<Vec<SimPoint>> {
    for p in paragraphs {
        p.check()?;
    }
    if repeats == 0 {
        return Err(Error::Config("simulation needs at least one repeat".into()));
    }
    if let Some(f) = fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(Error::Config(format!("fraction {f} outside [0, 1]")));
    }
    let wrong = errors(paragraphs, target);
    let runs: Vec<Vec<(f64, f64)>> = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let mut order = wrong.clone();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64)));
            fractions
                .iter()
                .map(|&f| {
                    let mut inputs: Vec<(Vec<ComponentType>, RelationAdjacency)> =
                        paragraphs.iter().map(|p| (p.base_types.clone(), p.base_relations.clone())).collect();
                    let k = (f * order.len() as f64).round() as usize;
                    for slot in &order[..k] {
                        match *slot {
                            Slot::Type(p, i) => inputs[p].0[i] = paragraphs[p].gold_types[i],
                            Slot::Relation(p, i, j) => inputs[p].1[i][j] = paragraphs[p].gold_relations[i][j],
                        }
                    }
                    score(paragraphs, &inputs, phi)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(fractions
        .iter()
        .enumerate()
        .map(|(k, &fraction)| {
            let n = repeats as f64;
            SimPoint {
                fraction,
                type_f1: runs.iter().map(|r| r[k].0).sum::<f64>() / n,
                relation_f1: runs.iter().map(|r| r[k].1).sum::<f64>() / n,
            }
        })
        .collect())
}

/// Joint-model scores on unmodified base predictions.
pub fn plain_scores(paragraphs: &[SimParagraph], phi: Phi) -> Result<(f64, f64)> {
    let inputs: Vec<_> = paragraphs.iter().map(|p| (p.base_types.clone(), p.base_relations.clone())).collect();
    score(paragraphs, &inputs, phi)
}

/// Joint-model scores with gold types and relations as input.
pub fn oracle_scores(paragraphs: &[SimParagraph], phi: Phi) -> Result<(f64, f64)> {
    let inputs: Vec<_> = paragraphs.iter().map(|p| (p.gold_types.clone(), p.gold_relations.clone())).collect();
    score(paragraphs, &inputs, phi)
}

/// CSV with columns `fraction,type_f1,relation_f1`.
pub fn curve_csv(points: &[SimPoint]) -> String {
    let mut out = String::from("fraction,type_f1,relation_f1\n");
    for p in points {
        out.push_str(&format!("{:.3},{:.6},{:.6}\n", p.fraction, p.type_f1, p.relation_f1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ComponentType::*;

    fn adj(n: usize, edges: &[(usize, usize)]) -> RelationAdjacency {
        let mut r = vec![vec![false; n]; n];
        for &(i, j) in edges {
            r[i][j] = true;
        }
        r
    }

    fn paragraphs() -> Vec<SimParagraph> {
        vec![
            SimParagraph {
                gold_types: vec![Claim, Premise, Premise],
                gold_relations: adj(3, &[(1, 0), (2, 0)]),
                base_types: vec![Premise, Premise, Claim],
                base_relations: adj(3, &[(0, 1), (2, 1)]),
            },
            SimParagraph {
                gold_types: vec![Premise, Claim],
                gold_relations: adj(2, &[(0, 1)]),
                base_types: vec![Claim, Claim],
                base_relations: adj(2, &[]),
            },
        ]
    }

    #[test]
    fn endpoints_equal_plain_and_oracle_runs() {
        let p = paragraphs();
        let phi = Phi::default();
        let curve = improvement_simulation(&p, &[0.0, 1.0], SimTarget::Both, 4, 7, phi).unwrap();
        let plain = plain_scores(&p, phi).unwrap();
        let oracle = oracle_scores(&p, phi).unwrap();
        assert_eq!((curve[0].type_f1, curve[0].relation_f1), plain);
        assert_eq!((curve[1].type_f1, curve[1].relation_f1), oracle);
        assert_eq!(oracle, (1.0, 1.0));
    }

    #[test]
    fn rejects_major_claims_and_bad_fractions() {
        let mut p = paragraphs();
        assert!(improvement_simulation(&p, &[1.5], SimTarget::Both, 1, 0, Phi::default()).is_err());
        p[0].gold_types[0] = MajorClaim;
        assert!(improvement_simulation(&p, &[0.5], SimTarget::Both, 1, 0, Phi::default()).is_err());
    }

    #[test]
    fn target_parses() {
        assert_eq!("relations".parse::<SimTarget>().unwrap(), SimTarget::Relations);
        assert!("all".parse::<SimTarget>().is_err());
    }
}
