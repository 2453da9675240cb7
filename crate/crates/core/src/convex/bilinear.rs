use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::dot;
use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::scalar::Scalar;

/// Largest simplex dimension solved by exact enumeration.
pub const EXACT_SIMPLEX_DIM: usize = 3;
pub const HEDGE_ITERATIONS: usize = 20_000;

/// `F(ξ, μ) = ⟨ξ, μ⟩ + A(μ)` with `ξ` in the hull of `strategies`, `μ` in the
/// probability simplex of dimension `simplex_dim` and `A` the affine
/// interpolation of `concave_part` (zero when omitted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilinearGame<T> {
    pub strategies: Vec<Vec<T>>,
    pub simplex_dim: usize,
    #[serde(default)]
    pub concave_part: Vec<T>,
}

impl<T: Scalar> BilinearGame<T> {
    pub fn new(strategies: Vec<Vec<T>>, simplex_dim: usize, concave_part: Vec<T>) -> Result<Self> {
        let game = Self { strategies, simplex_dim, concave_part };
        game.validate()?;
        Ok(game)
    }

    pub fn validate(&self) -> Result<()> {
        if self.strategies.is_empty() {
            return Err(Error::Empty("strategy set"));
        }
        if self.simplex_dim == 0 {
            return Err(Error::InvalidArgument("simplex_dim must be at least 1".into()));
        }
        if let Some(s) = self.strategies.iter().find(|s| s.len() != self.simplex_dim) {
            return Err(Error::Dimension { expected: self.simplex_dim, got: s.len() });
        }
        if !self.concave_part.is_empty() && self.concave_part.len() != self.simplex_dim {
            return Err(Error::Dimension { expected: self.simplex_dim, got: self.concave_part.len() });
        }
        Ok(())
    }

    /// Payoff vectors `ξ_k + a`, one per strategy.
    fn payoffs(&self) -> Vec<Vec<T>> {
        self.strategies
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, &x)| x + self.concave_part.get(i).copied().unwrap_or(T::zero())).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilinearReport<T> {
    /// `sup_μ inf_ξ F`; a certified lower bound when `exact` is false.
    pub sup_inf: T,
    /// `inf_ξ sup_μ F`; a certified upper bound when `exact` is false.
    pub inf_sup: T,
    pub gap: T,
    pub exact: bool,
    pub mu: Vec<T>,
    /// Optimal `ξ` and its weights on `strategies`.
    pub xi: Vec<T>,
    pub weights: Vec<T>,
    pub iterations: usize,
}

pub fn bilinear_minimax<T: Scalar>(game: &BilinearGame<T>) -> Result<BilinearReport<T>> {
    bilinear_minimax_with(game, HEDGE_ITERATIONS)
}

/// Solves the game from both sides: exactly by basis enumeration when
/// `simplex_dim <= 3`, otherwise by `iterations` rounds of Hedge.
pub fn bilinear_minimax_with<T: Scalar>(game: &BilinearGame<T>, iterations: usize) -> Result<BilinearReport<T>> {
    game.validate()?;
    let c = game.payoffs();
    let (mu, weights, iterations) = if game.simplex_dim <= EXACT_SIMPLEX_DIM {
        (maximin_mu(&c, game.simplex_dim), minimax_weights(&c, game.simplex_dim), 0)
    } else {
        let (mu, w) = hedge(&c, game.simplex_dim, iterations);
        (mu, w, iterations)
    };
    let sup_inf = inner_min(&c, &mu);
    let mixed = mix(&c, &weights, game.simplex_dim);
    let inf_sup = mixed.iter().copied().reduce(T::max_of).expect("simplex_dim >= 1");
    let xi = mix(&game.strategies, &weights, game.simplex_dim);
    Ok(BilinearReport {
        sup_inf,
        inf_sup,
        gap: inf_sup - sup_inf,
        exact: game.simplex_dim <= EXACT_SIMPLEX_DIM,
        mu,
        xi,
        weights,
        iterations,
    })
}

fn inner_min<T: Scalar>(c: &[Vec<T>], mu: &[T]) -> T {
    c.iter().map(|ck| dot(ck, mu)).reduce(T::min_of).expect("nonempty")
}

fn mix<T: Scalar>(vectors: &[Vec<T>], weights: &[T], dim: usize) -> Vec<T> {
    (0..dim).map(|i| vectors.iter().zip(weights).fold(T::zero(), |a, (v, &w)| a + w * v[i])).collect()
}

/// Projects a numerically solved distribution onto the simplex by clipping
/// rounding-level negatives. `None` when a weight is clearly negative.
fn clip<T: Scalar>(x: Vec<T>) -> Option<Vec<T>> {
    let tol = T::relax_tolerance();
    if x.iter().any(|&v| v < -tol) {
        return None;
    }
    let x: Vec<T> = x.into_iter().map(|v| v.max_of(T::zero())).collect();
    let s = x.iter().fold(T::zero(), |a, &b| a + b);
    if s <= T::zero() {
        return None;
    }
    Some(x.into_iter().map(|v| v / s).collect())
}

/// `argmax_μ min_k ⟨c_k, μ⟩`: every basis pairs a support `I` of `μ` with
/// `|I|` strategies that are indifferent on it.
fn maximin_mu<T: Scalar>(c: &[Vec<T>], d: usize) -> Vec<T> {
    let mut best: Option<(T, Vec<T>)> = None;
    for m in 1..=d.min(c.len()) {
        for support in (0..d).combinations(m) {
            for active in (0..c.len()).combinations(m) {
                // unknowns μ_I and t
                let mut a = Vec::with_capacity(m + 1);
                for &k in &active {
                    let mut row: Vec<T> = support.iter().map(|&i| c[k][i]).collect();
                    row.push(-T::one());
                    a.push(row);
                }
                let mut sum = vec![T::one(); m];
                sum.push(T::zero());
                a.push(sum);
                let mut b = vec![T::zero(); m];
                b.push(T::one());
                let Some(x) = solve(a, b, T::relax_tolerance()) else { continue };
                let Some(w) = clip(x[..m].to_vec()) else { continue };
                let mut mu = vec![T::zero(); d];
                for (&i, &v) in support.iter().zip(&w) {
                    mu[i] = v;
                }
                let value = inner_min(c, &mu);
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, mu));
                }
            }
        }
    }
    best.expect("a vertex of the simplex is always a basis").1
}

/// `argmin_λ max_i (Σ λ_k c_k)_i` by the symmetric enumeration.
fn minimax_weights<T: Scalar>(c: &[Vec<T>], d: usize) -> Vec<T> {
    let k = c.len();
    let mut best: Option<(T, Vec<T>)> = None;
    for m in 1..=d.min(k) {
        for coords in (0..d).combinations(m) {
            for support in (0..k).combinations(m) {
                let mut a = Vec::with_capacity(m + 1);
                for &i in &coords {
                    let mut row: Vec<T> = support.iter().map(|&j| c[j][i]).collect();
                    row.push(-T::one());
                    a.push(row);
                }
                let mut sum = vec![T::one(); m];
                sum.push(T::zero());
                a.push(sum);
                let mut b = vec![T::zero(); m];
                b.push(T::one());
                let Some(x) = solve(a, b, T::relax_tolerance()) else { continue };
                let Some(w) = clip(x[..m].to_vec()) else { continue };
                let mut lambda = vec![T::zero(); k];
                for (&j, &v) in support.iter().zip(&w) {
                    lambda[j] = v;
                }
                let value = mix(c, &lambda, d).into_iter().reduce(T::max_of).expect("d >= 1");
                if best.as_ref().is_none_or(|(b, _)| value < *b) {
                    best = Some((value, lambda));
                }
            }
        }
    }
    best.expect("a single strategy is always a basis").1
}

/// Simultaneous multiplicative weights; returns the averaged strategies.
fn hedge<T: Scalar>(c: &[Vec<T>], d: usize, iterations: usize) -> (Vec<T>, Vec<T>) {
    let k = c.len();
    let cf: Vec<Vec<f64>> = c.iter().map(|r| r.iter().map(|v| v.as_f64()).collect()).collect();
    let range = cf.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let rounds = iterations.max(1);
    let eta_mu = (8.0 * (d as f64).ln().max(1.0) / rounds as f64).sqrt() / (2.0 * range);
    let eta_lambda = (8.0 * (k as f64).ln().max(1.0) / rounds as f64).sqrt() / (2.0 * range);
    let mut log_mu = vec![0.0; d];
    let mut log_lambda = vec![0.0; k];
    let mut avg_mu = vec![0.0; d];
    let mut avg_lambda = vec![0.0; k];
    let normalize = |logs: &[f64]| {
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect::<Vec<f64>>()
    };
    for _ in 0..rounds {
        let mu = normalize(&log_mu);
        let lambda = normalize(&log_lambda);
        for (a, m) in avg_mu.iter_mut().zip(&mu) {
            *a += m;
        }
        for (a, l) in avg_lambda.iter_mut().zip(&lambda) {
            *a += l;
        }
        for i in 0..d {
            log_mu[i] += eta_mu * (0..k).map(|j| lambda[j] * cf[j][i]).sum::<f64>();
        }
        for j in 0..k {
            log_lambda[j] -= eta_lambda * (0..d).map(|i| mu[i] * cf[j][i]).sum::<f64>();
        }
    }
    let back = |v: Vec<f64>| v.into_iter().map(|x| T::of_f64(x / rounds as f64)).collect();
    (back(avg_mu), back(avg_lambda))
}
