//! Coboundary dual of the maximum ergodic average.
//!
//! On the recoded graph the dual problem is the linear program
//! `min t` subject to `w(u) + ψ(u) − ψ(v) <= t` for every edge `u -> v`.
//! Its optimum is the maximum cycle mean; with `t` fixed there, `ψ` is a
//! longest-path potential for the reduced weights `w − t`, which have no
//! positive cycle.

use serde::Serialize;

use crate::averages::alpha_karp;
use crate::error::{Error, Result};
use crate::graph::{canonical_rotation, cycle_mean, WeightedDigraph};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubActionSolution<T> {
    pub dual_value: T,
    /// One value per graph vertex, shifted so that the minimum is zero.
    pub psi: Vec<T>,
    /// `dual_value − (w(u) + ψ(u) − ψ(v))`, indexed like `graph.edges()`.
    pub slack: Vec<T>,
}

impl<T: Scalar> SubActionSolution<T> {
    pub fn min_slack(&self) -> T {
        self.slack.iter().copied().reduce(T::min_of).expect("graph has edges")
    }

    /// Edges whose slack is at most `tol`.
    pub fn tight_edges(&self, graph: &WeightedDigraph<T>, tol: T) -> Vec<(usize, usize)> {
        graph.edges().iter().zip(&self.slack).filter(|(_, &s)| s <= tol).map(|(&e, _)| e).collect()
    }

    /// Lexicographically smallest simple cycle made of tight edges.
    pub fn tight_cycle(&self, graph: &WeightedDigraph<T>, tol: T) -> Option<Vec<usize>> {
        let n = graph.len();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in self.tight_edges(graph, tol) {
            adj[u].push(v);
        }
        (0..n).find_map(|s| smallest_cycle_through(&adj, s))
    }
}

/// Greedy lexicographically smallest simple cycle through `start` that only
/// visits vertices `>= start`.
fn smallest_cycle_through(adj: &[Vec<usize>], start: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut path = vec![start];
    let mut used = vec![false; n];
    used[start] = true;
    loop {
        let u = *path.last().expect("nonempty");
        if adj[u].contains(&start) {
            return Some(path);
        }
        // smallest successor from which start is still reachable
        let next = adj[u].iter().copied().filter(|&v| v > start && !used[v]).find(|&v| {
            let mut seen = used.clone();
            let mut stack = vec![v];
            seen[v] = true;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if y == start {
                        return true;
                    }
                    if y > start && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            false
        })?;
        used[next] = true;
        path.push(next);
    }
}

/// Optimal value and sub-action for `inf_ψ sup_x (φ + ψ − ψ∘T)`.
pub fn solve_subaction<T: Scalar>(graph: &WeightedDigraph<T>) -> Result<SubActionSolution<T>> {
    let t = alpha_karp(graph).value;
    let n = graph.len();
    let edges = graph.edges();
    let eps = T::relax_tolerance();
    let mut psi = vec![T::zero(); n];
    let max_rounds = n * edges.len() + 1;
    let mut rounds = 0;
    loop {
        let mut changed = false;
        let mut worst = T::zero();
        for &(u, v) in edges {
            let want = psi[u] + graph.weight(u) - t;
            if want - psi[v] > eps {
                worst = worst.max_of(want - psi[v]);
                psi[v] = want;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        rounds += 1;
        if rounds >= max_rounds {
            return Err(Error::NonConvergence { what: "sub-action relaxation", iterations: rounds, residual: worst.as_f64() });
        }
    }
    let floor = psi.iter().copied().reduce(T::min_of).expect("nonempty");
    for p in &mut psi {
        *p = *p - floor;
    }
    let slack = edges.iter().map(|&(u, v)| t - (graph.weight(u) + psi[u] - psi[v])).collect();
    Ok(SubActionSolution { dual_value: t, psi, slack })
}

/// `max over edges of w(u) + ψ(u) − ψ(v)`: the dual objective at `psi`.
pub fn dual_objective<T: Scalar>(graph: &WeightedDigraph<T>, psi: &[T]) -> Result<T> {
    if psi.len() != graph.len() {
        return Err(Error::Dimension { expected: graph.len(), got: psi.len() });
    }
    Ok(graph
        .edges()
        .iter()
        .map(|&(u, v)| graph.weight(u) + psi[u] - psi[v])
        .reduce(T::max_of)
        .expect("graph has edges"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport<T> {
    pub alpha: T,
    /// Dual objective evaluated at the returned sub-action.
    pub dual_value: T,
    pub gap: T,
    pub max_violation: T,
    pub tight_cycle: Option<Vec<usize>>,
    pub tight_cycle_mean: Option<T>,
}

/// Strong-duality certificate: primal `α` from Karp, dual objective
/// recomputed from the returned `ψ`.
pub fn verify_duality<T: Scalar>(graph: &WeightedDigraph<T>, tight_tol: T) -> Result<(SubActionSolution<T>, DualityReport<T>)> {
    let alpha = alpha_karp(graph).value;
    let sol = solve_subaction(graph)?;
    let dual_value = dual_objective(graph, &sol.psi)?;
    let gap = (dual_value - alpha).abs();
    let max_violation = T::zero().max_of(-sol.min_slack());
    let tight_cycle = sol.tight_cycle(graph, tight_tol).map(|c| canonical_rotation(&c));
    let tight_cycle_mean = tight_cycle.as_ref().map(|c| cycle_mean(graph, c));
    let report = DualityReport { alpha, dual_value, gap, max_violation, tight_cycle, tight_cycle_mean };
    Ok((sol, report))
}
