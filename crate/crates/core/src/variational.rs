//! Both halves of the variational principle for spectral pressure.
//!
//! VP1: `Γ(φ) = sup_μ (h(μ) + ∫φ dμ)`, attained by the Gibbs chain.
//! VP2: `h(μ) = inf_φ (Γ(φ) − ∫φ dμ)`, minimized here over edge potentials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::markov::{markov_entropy, random_markov_measure, MarkovMeasure};
use crate::pressure::{gibbs_chain, PotentialVector, PressureEvaluation, PressureKind};
use crate::scalar::Real;

pub const VP1_GAP_TOL: f64 = 1e-8;
pub const VP1_COMPETITOR_TOL: f64 = 1e-9;
/// Edge potentials are kept inside `[−CAP, CAP]`.
pub const POTENTIAL_CAP: f64 = 50.0;
pub const VP2_STEP: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vp1Report<T> {
    pub lhs: T,
    pub rhs: T,
    pub gap: T,
    pub gibbs_entropy: T,
    pub competitors: usize,
    /// `max (h(μ′) + ∫φ dμ′) − Γ(φ)` over the random competitors.
    pub competitor_max_excess: T,
    pub gibbs_is_argmax: bool,
    pub passed: bool,
}

/// Checks VP1 at `phi` against the Gibbs chain and `n_competitors` random
/// Markov measures drawn from `seed`.
pub fn vp1_check<T: Real>(gamma: &PressureEvaluation<T>, phi: &PotentialVector<T>, n_competitors: usize, seed: u64) -> Result<Vp1Report<T>> {
    let lhs = gamma.evaluate(phi)?;
    let gibbs = gibbs_chain(gamma, phi)?;
    let gibbs_entropy = markov_entropy(&gibbs);
    let rhs = gibbs_entropy + phi.pairing(&gamma.graph, &gibbs);
    let gap = (lhs - rhs).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = T::neg_infinity();
    for _ in 0..n_competitors {
        let mu = random_markov_measure(&gamma.graph, &mut rng)?;
        best = best.max(markov_entropy(&mu) + phi.pairing(&gamma.graph, &mu));
    }
    let competitor_max_excess = best - lhs;
    let competitor_tol = T::of_f64(VP1_COMPETITOR_TOL);
    let gibbs_is_argmax = best <= rhs + competitor_tol;
    let passed = gap <= T::of_f64(VP1_GAP_TOL) && competitor_max_excess <= competitor_tol && gibbs_is_argmax;
    Ok(Vp1Report { lhs, rhs, gap, gibbs_entropy, competitors: n_competitors, competitor_max_excess, gibbs_is_argmax, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vp2Result<T> {
    pub value: T,
    pub grad_norm: T,
    pub iterations: usize,
    /// Some edge potential sits at the lower cap.
    pub boundary: bool,
    /// Minimizing edge potential, shifted so that its maximum is zero.
    pub potential: Vec<T>,
}

/// `g(φ) = Γ(φ) − ⟨φ, ν⟩` and its gradient `ν_Gibbs(φ) − ν`.
fn objective<T: Real>(gamma: &PressureEvaluation<T>, phi: &PotentialVector<T>, target: &[T]) -> Result<(T, Vec<T>)> {
    let p = gamma.evaluate(phi)?;
    let value = phi.values.iter().zip(target).fold(p, |a, (&f, &n)| a - f * n);
    let gibbs = gibbs_chain(gamma, phi)?.edge_occupation(&gamma.graph);
    Ok((value, gibbs.iter().zip(target).map(|(&g, &n)| g - n).collect()))
}

/// Gradient components that can still move: at the lower cap only a
/// positive-direction step is blocked.
fn projected_norm<T: Real>(phi: &[T], grad: &[T], cap: T) -> T {
    phi.iter()
        .zip(grad)
        .map(|(&f, &g)| if f <= -cap && g > T::zero() { T::zero() } else { g.abs() })
        .fold(T::zero(), T::max)
}

/// Entropy of `target` recovered as `inf_φ Γ(φ) − ∫φ dν` by projected
/// gradient descent over edge potentials.
pub fn entropy_via_vp2<T: Real>(gamma: &PressureEvaluation<T>, target: &MarkovMeasure<T>, tol: T, max_iter: usize) -> Result<Vp2Result<T>> {
    if gamma.kind != PressureKind::Spectral {
        return Err(Error::InvalidArgument("entropy_via_vp2 needs the spectral pressure".into()));
    }
    let g = &gamma.graph;
    let nu = target.edge_occupation(g);
    let cap = T::of_f64(POTENTIAL_CAP);
    // edges the target never uses go straight to the cap
    let pinned: Vec<bool> = nu.iter().map(|&m| m <= T::zero()).collect();
    let start = pinned.iter().map(|&p| if p { -cap } else { T::zero() }).collect();
    let mut phi = PotentialVector::edge(start);
    let (mut value, mut grad) = objective(gamma, &phi, &nu)?;
    let mut iterations = 0;
    loop {
        let norm = projected_norm(&phi.values, &grad, cap);
        if norm <= tol {
            let boundary = phi.values.iter().any(|&f| f <= -cap);
            return Ok(Vp2Result { value, grad_norm: norm, iterations, boundary, potential: phi.values });
        }
        if iterations >= max_iter {
            return Err(Error::NonConvergence { what: "entropy descent", iterations, residual: norm.as_f64() });
        }
        iterations += 1;
        let mut step = T::of_f64(VP2_STEP);
        loop {
            let moved: Vec<T> = phi.values.iter().zip(&grad).map(|(&f, &d)| f - step * d).collect();
            let top = moved.iter().zip(&pinned).filter(|(_, &p)| !p).map(|(&f, _)| f).fold(T::neg_infinity(), T::max);
            let trial = PotentialVector::edge(
                moved.into_iter().zip(&pinned).map(|(f, &p)| if p { -cap } else { (f - top).max(-cap) }).collect(),
            );
            let (v, gr) = objective(gamma, &trial, &nu)?;
            if v < value || step < T::of_f64(1e-12) {
                if v <= value {
                    phi = trial;
                    value = v;
                    grad = gr;
                }
                break;
            }
            step = step / T::of_f64(2.0);
        }
        if step < T::of_f64(1e-12) {
            // no decrease at any step size: stationary up to rounding
            let norm = projected_norm(&phi.values, &grad, cap);
            let boundary = phi.values.iter().any(|&f| f <= -cap);
            return Ok(Vp2Result { value, grad_norm: norm, iterations, boundary, potential: phi.values });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::trim_and_recode;
    use crate::markov::bernoulli;

    fn spectral(sys: &crate::symbolic::SubshiftSystem<f64>) -> PressureEvaluation<f64> {
        PressureEvaluation::new(PressureKind::Spectral, sys).unwrap()
    }

    #[test]
    fn vp1_examples() {
        let gm = spectral(&fixtures::golden_mean([0.0, 0.0]));
        let rep = vp1_check(&gm, &gm.graph_potential(), 20, 1).unwrap();
        assert!(rep.gap <= 1e-10 && rep.passed);
        assert!((rep.lhs - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);

        let full = spectral(&fixtures::full_shift(2, 0.0));
        let rep = vp1_check(&full, &full.graph_potential(), 20, 2).unwrap();
        assert!((rep.lhs - 2f64.ln()).abs() < 1e-12 && (rep.rhs - 2f64.ln()).abs() < 1e-12);

        let phi = PotentialVector::edge(vec![0.7, -1.3, 0.2, 2.1]);
        let rep = vp1_check(&full, &phi, 20, 3).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn vp2_examples() {
        let gm = spectral(&fixtures::golden_mean([0.0, 0.0]));
        let parry = gibbs_chain(&gm, &gm.graph_potential()).unwrap();
        let r = entropy_via_vp2(&gm, &parry, 1e-7, 100_000).unwrap();
        assert!((r.value - 0.481212).abs() < 1e-5);
        assert!(!r.boundary);

        let full = spectral(&fixtures::full_shift(2, 0.0));
        let iid = bernoulli(&full.graph, &[0.3, 0.7]).unwrap();
        let r = entropy_via_vp2(&full, &iid, 1e-7, 100_000).unwrap();
        assert!((r.value - markov_entropy(&iid)).abs() < 1e-5);
    }

    #[test]
    fn vp2_zero_entropy_targets() {
        // the {0,1} component of the three-point example on its own
        let sys = fixtures::three_point_system(0.25);
        let g = trim_and_recode(&sys).unwrap();
        let cycle = crate::graph::WeightedDigraph::from_edges(vec![g.weight(0), g.weight(1)], &[(0, 1), (1, 0)]).unwrap();
        let pe = PressureEvaluation::from_graph(PressureKind::Spectral, cycle).unwrap();
        let det = MarkovMeasure::new(&pe.graph, vec![0.5, 0.5], vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = entropy_via_vp2(&pe, &det, 1e-7, 1000).unwrap();
        assert!(f64::abs(r.value) < 1e-12);

        // same cycle inside the golden-mean shift: the loop at 0 is unused
        let gm = spectral(&fixtures::golden_mean([0.0, 0.0]));
        let det = MarkovMeasure::new(&gm.graph, vec![0.5, 0.5], vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = entropy_via_vp2(&gm, &det, 1e-7, 100_000).unwrap();
        assert!(r.value.abs() < 1e-5 && r.boundary, "{r:?}");
    }

    #[test]
    fn vp2_is_a_lower_envelope() {
        let full = spectral(&fixtures::full_shift(3, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let target = random_markov_measure(&full.graph, &mut rng).unwrap();
        let r = entropy_via_vp2(&full, &target, 1e-7, 100_000).unwrap();
        let nu = target.edge_occupation(&full.graph);
        use rand::Rng;
        for _ in 0..50 {
            let phi = PotentialVector::edge((0..nu.len()).map(|_| rng.gen_range(-3.0..3.0)).collect());
            let (v, _) = objective(&full, &phi, &nu).unwrap();
            assert!(v >= r.value - 1e-9);
        }
        assert!((r.value - markov_entropy(&target)).abs() < 1e-5);
    }
}
