//! Exact maximization of `sum w_ij x_ij` over forests: every node has at
//! most one outgoing edge, no self-loops, no directed cycles (hence at most
//! `n - 1` edges and at least one root).
//!
//! Branch and bound over the out-edge choice of each node in index order.
//! Per node the choices are tried as "none", then targets `n-1` down to `0`,
//! which enumerates `x` (read row-major) in increasing lexicographic order;
//! only strictly better objectives replace the incumbent, so the returned
//! optimum is the lexicographically smallest one.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub n: usize,
    /// Search nodes visited.
    pub visited: u64,
    /// Size of the unconstrained choice space, `n^n`.
    pub enumeration_size: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IlpSolution {
    pub x: Vec<Vec<bool>>,
    pub objective: f64,
    /// `b[i][j]`: a directed path leads from `i` to `j`.
    pub reach: Vec<Vec<bool>>,
    pub diagnostics: SolverDiagnostics,
}

impl IlpSolution {
    pub fn empty(n: usize) -> Self {
        IlpSolution::from_edges(n, &[])
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut succ = vec![None; n];
        for &(i, j) in edges {
            succ[i] = Some(j);
        }
        IlpSolution::from_successors(&succ, 0.0, SolverDiagnostics { n, ..Default::default() })
    }

    fn from_successors(succ: &[Option<usize>], objective: f64, diagnostics: SolverDiagnostics) -> Self {
        let n = succ.len();
        let mut x = vec![vec![false; n]; n];
        let mut reach = vec![vec![false; n]; n];
        for i in 0..n {
            if let Some(j) = succ[i] {
                x[i][j] = true;
            }
            let mut cur = succ[i];
            let mut steps = 0;
            while let Some(j) = cur {
                if reach[i][j] || steps > n {
                    break;
                }
                reach[i][j] = true;
                cur = succ[j];
                steps += 1;
            }
        }
        IlpSolution { x, objective, reach, diagnostics }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.x.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

struct Search<'a> {
    w: &'a [Vec<f64>],
    /// Best non-negative gain available to each node.
    best_gain: Vec<f64>,
    succ: Vec<Option<usize>>,
    best: Vec<Option<usize>>,
    best_value: f64,
    visited: u64,
}

impl Search<'_> {
    fn creates_cycle(&self, i: usize, j: usize) -> bool {
        let mut cur = Some(j);
        let mut steps = 0;
        while let Some(k) = cur {
            if k == i {
                return true;
            }
            steps += 1;
            if steps > self.succ.len() {
                return true;
            }
            cur = self.succ[k];
        }
        false
    }

    fn dfs(&mut self, i: usize, value: f64, remaining: f64) {
        self.visited += 1;
        let n = self.w.len();
        if i == n {
            if value > self.best_value {
                self.best_value = value;
                self.best = self.succ.clone();
            }
            return;
        }
        if value + remaining <= self.best_value {
            return;
        }
        let rest = remaining - self.best_gain[i];
        self.dfs(i + 1, value, rest);
        for j in (0..n).rev() {
            if j == i || self.creates_cycle(i, j) {
                continue;
            }
            self.succ[i] = Some(j);
            self.dfs(i + 1, value + self.w[i][j], rest);
            self.succ[i] = None;
        }
    }
}

pub fn solve_tree(w: &[Vec<f64>]) -> IlpSolution {
    let n = w.len();
    let best_gain: Vec<f64> =
        (0..n).map(|i| (0..n).filter(|&j| j != i).map(|j| w[i][j]).fold(0.0, f64::max)).collect();
    let remaining = best_gain.iter().sum();
    let mut search = Search {
        w,
        best_gain,
        succ: vec![None; n],
        best: vec![None; n],
        best_value: 0.0,
        visited: 0,
    };
    // The empty forest (objective 0) is the first leaf of the enumeration.
    search.dfs(0, 0.0, remaining);
    let diagnostics = SolverDiagnostics { n, visited: search.visited, enumeration_size: (n as f64).powi(n as i32) };
    IlpSolution::from_successors(&search.best, search.best_value, diagnostics)
}

/// Structural constraint violations of a solution; empty when valid.
pub fn validate_solution(s: &IlpSolution) -> Vec<String> {
    let n = s.x.len();
    let mut problems = Vec::new();
    let mut edges = 0;
    for i in 0..n {
        let out = s.x[i].iter().filter(|&&v| v).count();
        edges += out;
        if out > 1 {
            problems.push(format!("node {i} has {out} outgoing relations"));
        }
        if s.x[i][i] {
            problems.push(format!("self-loop at {i}"));
        }
        for j in 0..n {
            if s.x[i][j] && !s.reach[i][j] {
                problems.push(format!("edge {i}->{j} missing from reachability"));
            }
            for k in 0..n {
                if s.reach[i][j] && s.reach[j][k] && !s.reach[i][k] {
                    problems.push(format!("reachability not transitive at {i}->{j}->{k}"));
                }
            }
        }
        if s.reach[i][i] {
            problems.push(format!("cycle through {i}"));
        }
    }
    if n > 0 && edges > n - 1 {
        problems.push(format!("{edges} relations exceed n - 1 = {}", n - 1));
    }
    problems
}
