//! Markov measures on the recoded graph.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::linalg::solve;
use crate::scalar::Real;

/// Stationary Markov chain supported on the edges of a graph.
///
/// The edge occupation `ν(u,v) = stationary(u)·transitions(u,v)` is the
/// invariant measure of cylinders of length two; `∫φ dμ` is `Σ ν·φ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkovMeasure<T> {
    pub stationary: Vec<T>,
    pub transitions: Vec<Vec<T>>,
}

impl<T: Real> MarkovMeasure<T> {
    /// Validates a chain against `graph`: row-stochastic, zero off the edge
    /// set, stationary summing to one and invariant.
    pub fn new(graph: &WeightedDigraph<T>, stationary: Vec<T>, transitions: Vec<Vec<T>>) -> Result<Self> {
        let n = graph.len();
        if stationary.len() != n {
            return Err(Error::Dimension { expected: n, got: stationary.len() });
        }
        if let Some(row) = transitions.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension { expected: n, got: row.len() });
        }
        if transitions.len() != n {
            return Err(Error::Dimension { expected: n, got: transitions.len() });
        }
        let tol_sum = T::of_f64(1e-12).max(T::epsilon() * T::of_count(16 * n));
        let tol_inv = T::of_f64(1e-10).max(T::epsilon() * T::of_count(64 * n));
        for (u, row) in transitions.iter().enumerate() {
            for (v, &p) in row.iter().enumerate() {
                if p < T::zero() || !p.is_finite() {
                    return Err(Error::InvalidMeasure(format!("transition ({u},{v}) = {p}")));
                }
                if p > T::zero() && graph.edge_index(u, v).is_none() {
                    return Err(Error::InvalidMeasure(format!("mass on forbidden edge ({u},{v})")));
                }
            }
            let s = row.iter().fold(T::zero(), |a, &b| a + b);
            if (s - T::one()).abs() > tol_inv {
                return Err(Error::InvalidMeasure(format!("row {u} sums to {s}")));
            }
        }
        if stationary.iter().any(|&p| p < T::zero() || !p.is_finite()) {
            return Err(Error::InvalidMeasure("negative stationary mass".into()));
        }
        let total = stationary.iter().fold(T::zero(), |a, &b| a + b);
        if (total - T::one()).abs() > tol_sum {
            return Err(Error::InvalidMeasure(format!("stationary vector sums to {total}")));
        }
        let measure = Self { stationary, transitions };
        let residual = measure.stationarity_residual();
        if residual > tol_inv {
            return Err(Error::InvalidMeasure(format!("stationarity residual {residual}")));
        }
        Ok(measure)
    }

    /// Builds the chain from a transition matrix, solving for the stationary
    /// vector. The chain must have a unique stationary distribution.
    pub fn from_transitions(graph: &WeightedDigraph<T>, transitions: Vec<Vec<T>>) -> Result<Self> {
        let n = graph.len();
        if transitions.len() != n {
            return Err(Error::Dimension { expected: n, got: transitions.len() });
        }
        // π (P − I) = 0 with the last equation replaced by Σπ = 1
        let mut a = vec![vec![T::zero(); n]; n];
        for (v, row) in a.iter_mut().enumerate() {
            for (u, entry) in row.iter_mut().enumerate() {
                *entry = transitions[u].get(v).copied().unwrap_or(T::zero()) - if u == v { T::one() } else { T::zero() };
            }
        }
        a[n - 1] = vec![T::one(); n];
        let mut b = vec![T::zero(); n];
        b[n - 1] = T::one();
        let stationary = solve(a, b, T::of_f64(1e-13))
            .ok_or_else(|| Error::InvalidMeasure("stationary distribution is not unique".into()))?;
        let stationary = stationary.into_iter().map(|p| if p < T::zero() { T::zero() } else { p }).collect();
        Self::new(graph, stationary, transitions)
    }

    pub fn len(&self) -> usize {
        self.stationary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stationary.is_empty()
    }

    /// `max_v |Σ_u π(u) P(u,v) − π(v)|`.
    pub fn stationarity_residual(&self) -> T {
        let n = self.len();
        (0..n)
            .map(|v| {
                let s = (0..n).fold(T::zero(), |a, u| a + self.stationary[u] * self.transitions[u][v]);
                (s - self.stationary[v]).abs()
            })
            .fold(T::zero(), T::max)
    }

    /// Edge occupation, indexed like `graph.edges()`.
    pub fn edge_occupation(&self, graph: &WeightedDigraph<T>) -> Vec<T> {
        graph.edges().iter().map(|&(u, v)| self.stationary[u] * self.transitions[u][v]).collect()
    }

    /// `true` when every allowed edge carries positive mass.
    pub fn is_interior(&self, graph: &WeightedDigraph<T>) -> bool {
        self.edge_occupation(graph).iter().all(|&m| m > T::zero())
    }
}

/// Entropy `−Σ_u π(u) Σ_v P(u,v) log P(u,v)`, with `0 log 0 = 0`.
pub fn markov_entropy<T: Real>(mu: &MarkovMeasure<T>) -> T {
    mu.stationary.iter().zip(&mu.transitions).fold(T::zero(), |acc, (&pi, row)| {
        let h = row.iter().filter(|&&p| p > T::zero()).fold(T::zero(), |a, &p| a - p * p.ln());
        acc + pi * h
    })
}

/// Random chain with every allowed edge positive. The graph must be
/// irreducible.
pub fn random_markov_measure<T: Real, R: Rng + ?Sized>(graph: &WeightedDigraph<T>, rng: &mut R) -> Result<MarkovMeasure<T>> {
    let n = graph.len();
    let mut p = vec![vec![T::zero(); n]; n];
    for (u, row) in p.iter_mut().enumerate() {
        let raw: Vec<f64> = graph.successors(u).iter().map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        for (&v, r) in graph.successors(u).iter().zip(raw) {
            row[v] = T::of_f64(r / total);
        }
    }
    MarkovMeasure::from_transitions(graph, p)
}

/// Bernoulli measure on the full shift: every row equals `probabilities`.
pub fn bernoulli<T: Real>(graph: &WeightedDigraph<T>, probabilities: &[T]) -> Result<MarkovMeasure<T>> {
    let n = graph.len();
    if probabilities.len() != n {
        return Err(Error::Dimension { expected: n, got: probabilities.len() });
    }
    MarkovMeasure::new(graph, probabilities.to_vec(), vec![probabilities.to_vec(); n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::trim_and_recode;

    #[test]
    fn entropy_examples() {
        let g = trim_and_recode(&fixtures::full_shift(2, 0.0)).unwrap();
        let uniform = bernoulli(&g, &[0.5, 0.5]).unwrap();
        assert!((markov_entropy(&uniform) - 2f64.ln()).abs() < 1e-15);
        let iid = bernoulli(&g, &[0.3, 0.7]).unwrap();
        let expect = -(0.3 * 0.3f64.ln() + 0.7 * 0.7f64.ln());
        assert!((markov_entropy(&iid) - expect).abs() < 1e-15);
        assert!((markov_entropy(&iid) - 0.610864).abs() < 1e-6);
        let cyc = trim_and_recode(&fixtures::three_point_system(0.25)).unwrap();
        // deterministic 2-cycle on {0, 1}; the transient symbol a keeps its row
        let det = MarkovMeasure::new(
            &cyc,
            vec![0.5, 0.5, 0.0],
            vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
        )
        .unwrap();
        assert_eq!(markov_entropy(&det), 0.0);
    }

    #[test]
    fn validation() {
        let g = trim_and_recode(&fixtures::golden_mean([0.0, 0.0])).unwrap();
        // mass on the forbidden word 11
        let bad = MarkovMeasure::new(&g, vec![0.5, 0.5], vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert!(matches!(bad, Err(Error::InvalidMeasure(_))));
        let not_stationary = MarkovMeasure::new(&g, vec![0.5, 0.5], vec![vec![0.5, 0.5], vec![1.0, 0.0]]);
        assert!(matches!(not_stationary, Err(Error::InvalidMeasure(_))));
        let ok = MarkovMeasure::from_transitions(&g, vec![vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        assert!((ok.stationary[0] - 2f64 / 3.0).abs() < 1e-15);
        assert!(ok.is_interior(&g));
    }

    #[test]
    fn random_measures_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = trim_and_recode(&fixtures::full_shift(4, 0.0)).unwrap();
        for _ in 0..10 {
            let mu = random_markov_measure(&g, &mut rng).unwrap();
            assert!(mu.stationarity_residual() < 1e-12);
            assert!(mu.is_interior(&g));
        }
    }
}
