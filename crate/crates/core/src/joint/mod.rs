//! Joint tree inference over one paragraph: claim scores from predicted
//! relations, a weight matrix combining relation, claim-score and type
//! evidence, and an exact solver for the best forest of argument trees.

mod solver;

use serde::{Deserialize, Serialize};

use crate::corpus::ComponentType;
use crate::error::{Error, Result};

pub use solver::{solve_tree, validate_solution, IlpSolution, SolverDiagnostics};

/// Square 0/1 matrix; `r[i][j]` means a predicted relation from `i` to `j`.
pub type RelationAdjacency = Vec<Vec<bool>>;
pub type WeightMatrix = Vec<Vec<f64>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimScores {
    pub cs: Vec<f64>,
    pub rel_in: Vec<usize>,
    pub rel_out: Vec<usize>,
    pub rel: usize,
}

/// `cs_i = (in_i - out_i + n - 1) / (rel + n - 1)`, or 0 when the
/// denominator vanishes (a single component without relations).
pub fn claim_scores(r: &RelationAdjacency) -> ClaimScores {
    let n = r.len();
    let mut rel_in = vec![0; n];
    let mut rel_out = vec![0; n];
    for (i, row) in r.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x && i != j {
                rel_out[i] += 1;
                rel_in[j] += 1;
            }
        }
    }
    let rel: usize = rel_out.iter().sum();
    let denom = (rel + n).saturating_sub(1) as f64;
    let cs = (0..n)
        .map(|i| {
            if denom == 0.0 {
                0.0
            } else {
                (rel_in[i] as f64 - rel_out[i] as f64 + (n - 1) as f64) / denom
            }
        })
        .collect();
    ClaimScores { cs, rel_in, rel_out, rel }
}

/// Weights of the relation, claim-score and claim-type terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phi {
    pub r: f64,
    pub cr: f64,
    pub c: f64,
}

impl Default for Phi {
    fn default() -> Self {
        Phi { r: 0.5, cr: 0.25, c: 0.25 }
    }
}

impl Phi {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("phi_r", self.r), ("phi_cr", self.cr), ("phi_c", self.c)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be a non-negative number, got {v}")));
            }
        }
        Ok(())
    }
}

/// `w_ij = phi_r r_ij + phi_cr (cs_j - cs_i) + phi_c [j is a claim]`.
pub fn build_weights(r: &RelationAdjacency, types: &[ComponentType], phi: Phi) -> Result<WeightMatrix> {
    phi.validate()?;
    let n = r.len();
    if types.len() != n || r.iter().any(|row| row.len() != n) {
        return Err(Error::Contract(format!("relation matrix and {} types do not match", types.len())));
    }
    if types.contains(&ComponentType::MajorClaim) {
        return Err(Error::Contract("major claims do not take part in tree inference".into()));
    }
    let cs = claim_scores(r).cs;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let rij = if r[i][j] { 1.0 } else { 0.0 };
                    let cij = if types[j] == ComponentType::Claim { 1.0 } else { 0.0 };
                    phi.r * rij + phi.cr * (cs[j] - cs[i]) + phi.c * cij
                })
                .collect()
        })
        .collect())
}

/// Types and relations read off a solution: components with an outgoing
/// relation become premises, the others claims. Major claims stay as they are.
pub fn apply_structure(solution: &IlpSolution, types: &[ComponentType]) -> (Vec<ComponentType>, Vec<(usize, usize)>) {
    let mut relations = Vec::new();
    let mut out = types.to_vec();
    for (i, row) in solution.x.iter().enumerate() {
        let target = row.iter().position(|&x| x);
        if let Some(j) = target {
            relations.push((i, j));
        }
        if out[i] != ComponentType::MajorClaim {
            out[i] = if target.is_some() { ComponentType::Premise } else { ComponentType::Claim };
        }
    }
    (out, relations)
}

/// Solution, revised types and relations of one paragraph.
pub type Inference = (IlpSolution, Vec<ComponentType>, Vec<(usize, usize)>);

/// Full inference for one paragraph's claims and premises.
pub fn infer_paragraph(r: &RelationAdjacency, types: &[ComponentType], phi: Phi) -> Result<Inference> {
    let solution = if r.len() <= 1 {
        phi.validate()?;
        IlpSolution::empty(r.len())
    } else {
        solve_tree(&build_weights(r, types, phi)?)
    };
    let (t, rel) = apply_structure(&solution, types);
    Ok((solution, t, rel))
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

    #[test]
    fn star_target_scores_one() {
        let cs = claim_scores(&adj(4, &[(0, 3), (1, 3), (2, 3)])).cs;
        assert!((cs[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn leaf_in_four_component_paragraph_scores_one_third() {
        // rel = 3; component 0 has no incoming and one outgoing relation.
        let cs = claim_scores(&adj(4, &[(0, 1), (1, 3), (2, 3)])).cs;
        assert!((cs[0] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_pair_scores_one() {
        assert_eq!(claim_scores(&adj(2, &[])).cs, vec![1.0, 1.0]);
        assert_eq!(claim_scores(&adj(1, &[])).cs, vec![0.0]);
    }

    #[test]
    fn two_component_weights() {
        let w = build_weights(&adj(2, &[(0, 1)]), &[Premise, Claim], Phi::default()).unwrap();
        assert!((w[0][1] - 1.0).abs() < 1e-12);
        assert!((w[1][0] + 0.25).abs() < 1e-12);
    }

    #[test]
    fn relation_only_phi_gives_r() {
        let r = adj(3, &[(0, 1), (2, 1)]);
        let w = build_weights(&r, &[Premise, Claim, Premise], Phi { r: 1.0, cr: 0.0, c: 0.0 }).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(w[i][j], if r[i][j] { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn negative_phi_is_rejected() {
        let r = adj(2, &[]);
        assert!(matches!(build_weights(&r, &[Claim, Claim], Phi { r: -1.0, cr: 0.0, c: 0.0 }), Err(Error::Config(_))));
    }

    #[test]
    fn incoming_edge_never_lowers_balance() {
        let base = adj(4, &[(1, 2)]);
        let before = claim_scores(&base);
        let mut more = base.clone();
        more[3][0] = true;
        let after = claim_scores(&more);
        assert!(after.rel_in[0] as i64 - after.rel_out[0] as i64 >= before.rel_in[0] as i64 - before.rel_out[0] as i64);
    }

    #[test]
    fn structure_rules() {
        let types = [Claim, Premise, Claim, Premise];
        let star = IlpSolution::from_edges(4, &[(0, 2), (1, 2), (3, 2)]);
        assert_eq!(apply_structure(&star, &types).0, vec![Premise, Premise, Claim, Premise]);
        let empty = IlpSolution::empty(4);
        assert_eq!(apply_structure(&empty, &types).0, vec![Claim; 4]);
        let chain = IlpSolution::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(apply_structure(&chain, &[Premise, Premise, Premise]).0, vec![Premise, Premise, Claim]);
        assert_eq!(apply_structure(&empty, &[MajorClaim, Premise, Claim, Claim]).0[0], MajorClaim);
    }
}
