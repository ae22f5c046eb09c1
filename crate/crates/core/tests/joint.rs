//! Tree solver against exhaustive enumeration of all forests.

use argstruct::joint::{solve_tree, validate_solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Best objective over every out-degree <= 1, acyclic, loop-free edge set,
/// with the lexicographically smallest row-major `x` among optima.
fn oracle(w: &[Vec<f64>]) -> (f64, Vec<Vec<bool>>) {
    let n = w.len();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut choice = vec![0usize; n]; // 0 = none, j + 1 = edge to j
    loop {
        let mut x = vec![vec![false; n]; n];
        let mut valid = true;
        for i in 0..n {
            if choice[i] > 0 {
                let j = choice[i] - 1;
                valid &= j != i;
                x[i][j] = true;
            }
        }
        // Acyclic iff repeatedly removing nodes without outgoing edges empties the graph.
        if valid {
            let mut alive = vec![true; n];
            loop {
                let sink = (0..n).find(|&i| alive[i] && (0..n).all(|j| !(x[i][j] && alive[j])));
                match sink {
                    Some(s) => alive[s] = false,
                    None => break,
                }
            }
            valid = alive.iter().all(|a| !a);
        }
        if valid {
            let value: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| x[i][j]).map(|(i, j)| w[i][j]).sum();
            if value > best.0 + 1e-12 || ((value - best.0).abs() <= 1e-12 && x < best.1) {
                best = (value, x);
            }
        }
        let mut k = 0;
        while k < n {
            choice[k] += 1;
            if choice[k] <= n {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    best
}

#[test]
fn solver_matches_exhaustive_oracle_on_small_paragraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in 2..=5 {
        for _ in 0..200 {
            let w: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let s = solve_tree(&w);
            let (value, x) = oracle(&w);
            assert!(validate_solution(&s).is_empty());
            assert!((s.objective - value).abs() < 1e-9);
            assert_eq!(s.x, x);
        }
    }
}

#[test]
fn ties_on_discrete_weights_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let n = rng.gen_range(2..=4);
        let w: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1..=2) as f64 * 0.25).collect()).collect();
        let s = solve_tree(&w);
        let (value, x) = oracle(&w);
        assert!((s.objective - value).abs() < 1e-9);
        assert_eq!(s.x, x);
    }
}
