//! Joint inference on one hand-made paragraph of four components. The base
//! classifiers predict two relations that form a cycle and type two
//! components as claims; the solver returns the best forest.
//!
//!     cargo run --example tree_inference

use argstruct::corpus::ComponentType::{Claim, Premise};
use argstruct::joint::{build_weights, claim_scores, infer_paragraph, validate_solution, Phi};

fn main() -> argstruct::Result<()> {
    let mut r = vec![vec![false; 4]; 4];
    r[1][0] = true;
    r[2][0] = true;
    r[0][2] = true;
    r[3][2] = true;
    let types = [Claim, Premise, Claim, Premise];
    let phi = Phi::default();

    println!("claim scores {:?}", claim_scores(&r).cs);
    for row in build_weights(&r, &types, phi)? {
        println!("  {}", row.iter().map(|w| format!("{w:6.3}")).collect::<Vec<_>>().join(" "));
    }
    let (solution, new_types, relations) = infer_paragraph(&r, &types, phi)?;
    println!("objective {:.4}, {} search nodes", solution.objective, solution.diagnostics.visited);
    println!("types {new_types:?}");
    println!("relations {relations:?}");
    assert!(validate_solution(&solution).is_empty());
    Ok(())
}
