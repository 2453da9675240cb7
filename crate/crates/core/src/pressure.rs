//! Pressure functions on finite subshifts.
//!
//! A pressure function maps potentials to reals and is monotone (C1),
//! translation invariant (C2) and convex (C3); some are also invariant under
//! adding coboundaries (C4). Three instances are provided:
//!
//! * [`PressureKind::Spectral`]: log of the Perron root of the weighted
//!   transition matrix (topological pressure),
//! * [`PressureKind::SupNorm`]: the largest potential value,
//! * [`PressureKind::MaxErgodic`]: the maximum ergodic average.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::averages::alpha_karp;
use crate::error::{Error, Result};
use crate::graph::{trim_and_recode, WeightedDigraph};
use crate::linalg::{perron_right, transpose};
use crate::markov::MarkovMeasure;
use crate::scalar::{Real, Scalar};
use crate::symbolic::SubshiftSystem;

/// Relative tolerance of the Perron root iteration.
pub const POWER_TOL: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 100_000;

/// Whether a potential vector lives on vertices (depth one over the recoded
/// graph) or on edges (depth two).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialDepth {
    Vertex,
    Edge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialVector<T> {
    pub depth: PotentialDepth,
    pub values: Vec<T>,
}

impl<T: Scalar> PotentialVector<T> {
    pub fn vertex(values: Vec<T>) -> Self {
        Self { depth: PotentialDepth::Vertex, values }
    }

    pub fn edge(values: Vec<T>) -> Self {
        Self { depth: PotentialDepth::Edge, values }
    }

    pub fn constant<U: Scalar>(graph: &WeightedDigraph<U>, depth: PotentialDepth, c: T) -> Self {
        let n = match depth {
            PotentialDepth::Vertex => graph.len(),
            PotentialDepth::Edge => graph.edges().len(),
        };
        Self { depth, values: vec![c; n] }
    }

    pub fn check<U: Scalar>(&self, graph: &WeightedDigraph<U>) -> Result<()> {
        let expected = match self.depth {
            PotentialDepth::Vertex => graph.len(),
            PotentialDepth::Edge => graph.edges().len(),
        };
        if self.values.len() != expected {
            return Err(Error::Dimension { expected, got: self.values.len() });
        }
        Ok(())
    }

    /// The same function as an edge potential: `φ(u,v) = φ(u)`.
    pub fn to_edges<U: Scalar>(&self, graph: &WeightedDigraph<U>) -> Self {
        match self.depth {
            PotentialDepth::Edge => self.clone(),
            PotentialDepth::Vertex => Self::edge(graph.edges().iter().map(|&(u, _)| self.values[u]).collect()),
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { depth: self.depth, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise combination; lifts to edges when the depths differ.
    pub fn zip_with<U: Scalar>(&self, other: &Self, graph: &WeightedDigraph<U>, f: impl Fn(T, T) -> T) -> Self {
        let (a, b) = if self.depth == other.depth {
            (self.clone(), other.clone())
        } else {
            (self.to_edges(graph), other.to_edges(graph))
        };
        Self { depth: a.depth, values: a.values.iter().zip(&b.values).map(|(&x, &y)| f(x, y)).collect() }
    }

    pub fn add_constant(&self, c: T) -> Self {
        self.map(|v| v + c)
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    /// Adds `ψ∘T − ψ` (`sign = +1`) or `ψ − ψ∘T` (`sign = −1`) for a vertex
    /// function `ψ`, as an edge potential.
    pub fn add_coboundary<U: Scalar>(&self, graph: &WeightedDigraph<U>, psi: &[T], forward: bool) -> Self {
        let e = self.to_edges(graph);
        let values = graph
            .edges()
            .iter()
            .zip(&e.values)
            .map(|(&(u, v), &x)| if forward { x + psi[v] - psi[u] } else { x + psi[u] - psi[v] })
            .collect();
        Self::edge(values)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().reduce(T::max_of).expect("nonempty potential")
    }

    /// `∫φ dμ` for a Markov measure.
    pub fn pairing<U: Scalar>(&self, graph: &WeightedDigraph<U>, mu: &MarkovMeasure<T>) -> T
    where
        T: Real,
    {
        match self.depth {
            PotentialDepth::Vertex => self.values.iter().zip(&mu.stationary).fold(T::zero(), |a, (&f, &p)| a + f * p),
            PotentialDepth::Edge => graph
                .edges()
                .iter()
                .zip(&self.values)
                .fold(T::zero(), |a, (&(u, v), &f)| a + f * mu.stationary[u] * mu.transitions[u][v]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PressureKind {
    Spectral,
    SupNorm,
    MaxErgodic,
}

/// A concrete pressure function bound to a trimmed graph.
#[derive(Debug, Clone)]
pub struct PressureEvaluation<T> {
    pub kind: PressureKind,
    pub graph: WeightedDigraph<T>,
}

/// Weighted matrix and the log-scale offset that was factored out of it.
struct WeightedMatrix<T> {
    matrix: Vec<Vec<T>>,
    offset: T,
}

impl<T: Real> PressureEvaluation<T> {
    pub fn new(kind: PressureKind, system: &SubshiftSystem<T>) -> Result<Self> {
        Self::from_graph(kind, trim_and_recode(system)?)
    }

    /// The spectral instance refuses reducible graphs.
    pub fn from_graph(kind: PressureKind, graph: WeightedDigraph<T>) -> Result<Self> {
        if kind == PressureKind::Spectral {
            let comps = graph.strongly_connected_components();
            if comps.len() != 1 {
                return Err(Error::Reducible { components: comps.len() });
            }
        }
        Ok(Self { kind, graph })
    }

    /// The potential carried by the graph's vertex weights.
    pub fn graph_potential(&self) -> PotentialVector<T> {
        PotentialVector::vertex(self.graph.weights().to_vec())
    }

    pub fn evaluate(&self, phi: &PotentialVector<T>) -> Result<T> {
        phi.check(&self.graph)?;
        match self.kind {
            PressureKind::Spectral => Ok(self.perron(phi)?.0),
            PressureKind::SupNorm => Ok(phi.max_value()),
            PressureKind::MaxErgodic => {
                let g = match phi.depth {
                    PotentialDepth::Vertex => self.graph.with_weights(phi.values.clone())?,
                    PotentialDepth::Edge => self.graph.line_graph(&phi.values)?,
                };
                Ok(alpha_karp(&g).value)
            }
        }
    }

    fn weighted_matrix(&self, phi: &PotentialVector<T>) -> WeightedMatrix<T> {
        let n = self.graph.len();
        let offset = phi.max_value();
        let mut matrix = vec![vec![T::zero(); n]; n];
        for (e, &(u, v)) in self.graph.edges().iter().enumerate() {
            let x = match phi.depth {
                PotentialDepth::Vertex => phi.values[u],
                PotentialDepth::Edge => phi.values[e],
            };
            matrix[u][v] = (x - offset).exp();
        }
        WeightedMatrix { matrix, offset }
    }

    /// `(log ρ, right Perron vector, matrix)` of the weighted matrix.
    fn perron(&self, phi: &PotentialVector<T>) -> Result<(T, Vec<T>, WeightedMatrix<T>)> {
        let wm = self.weighted_matrix(phi);
        let pair = perron_right(&wm.matrix, None, T::of_f64(POWER_TOL), POWER_MAX_ITER)?;
        Ok((pair.root.ln() + wm.offset, pair.vector, wm))
    }

    fn require_spectral(&self) -> Result<()> {
        if self.kind != PressureKind::Spectral {
            return Err(Error::InvalidArgument(format!("{:?} pressure has no Gibbs measure", self.kind)));
        }
        Ok(())
    }
}

/// Spectral pressure of `phi` over `system`.
pub fn spectral_pressure<T: Real>(system: &SubshiftSystem<T>, phi: &PotentialVector<T>) -> Result<T> {
    PressureEvaluation::new(PressureKind::Spectral, system)?.evaluate(phi)
}

pub fn sup_pressure<T: Real>(phi: &PotentialVector<T>) -> T {
    phi.max_value()
}

pub fn max_ergodic_pressure<T: Real>(graph: &WeightedDigraph<T>, phi: &PotentialVector<T>) -> Result<T> {
    PressureEvaluation::from_graph(PressureKind::MaxErgodic, graph.clone())?.evaluate(phi)
}

/// Gibbs (equilibrium) chain of the spectral pressure:
/// `P(u,v) = M(u,v) r(v) / (λ r(u))`, `π(u) ∝ l(u) r(u)`.
pub fn gibbs_chain<T: Real>(gamma: &PressureEvaluation<T>, phi: &PotentialVector<T>) -> Result<MarkovMeasure<T>> {
    gamma.require_spectral()?;
    phi.check(&gamma.graph)?;
    let (_, r, wm) = gamma.perron(phi)?;
    let left = perron_right(&transpose(&wm.matrix), None, T::of_f64(POWER_TOL), POWER_MAX_ITER)?;
    let n = gamma.graph.len();
    let mut transitions = vec![vec![T::zero(); n]; n];
    for (u, row) in transitions.iter_mut().enumerate() {
        let raw: Vec<T> = (0..n).map(|v| wm.matrix[u][v] * r[v]).collect();
        let total = raw.iter().fold(T::zero(), |a, &b| a + b);
        for (slot, x) in row.iter_mut().zip(raw) {
            *slot = x / total;
        }
    }
    let weights: Vec<T> = left.vector.iter().zip(&r).map(|(&l, &r)| l * r).collect();
    let total = weights.iter().fold(T::zero(), |a, &b| a + b);
    let stationary = weights.into_iter().map(|w| w / total).collect();
    MarkovMeasure::new(&gamma.graph, stationary, transitions)
}

/// `ξ ∈ A_Γ`, i.e. `Γ(−ξ) <= tol`. Returns the membership and `Γ(−ξ)`.
pub fn in_a_gamma<T: Real>(gamma: &PressureEvaluation<T>, xi: &PotentialVector<T>, tol: T) -> Result<(bool, T)> {
    let v = gamma.evaluate(&xi.neg())?;
    Ok((v <= tol, v))
}

// ---------------------------------------------------------------------------
// Axiom checks

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Monotonicity,
    TranslationInvariance,
    Convexity,
    CohomologyInvariance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomFailure<T> {
    pub axiom: Axiom,
    pub sample: usize,
    pub lhs: T,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomSummary<T> {
    pub checked: usize,
    pub failed: usize,
    /// Largest violation `lhs − rhs` (for inequalities) or `|lhs − rhs|`.
    pub worst_residual: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport<T> {
    pub kind: PressureKind,
    pub summary: BTreeMap<Axiom, AxiomSummary<T>>,
    pub failures: Vec<AxiomFailure<T>>,
    pub passed: bool,
}

/// Constants used for translation invariance.
pub const TRANSLATIONS: [f64; 3] = [-2.5, 0.5, 5.0];

/// Verifies C1–C3 (and C4 where it applies) on sample pairs `(φ, ψ)`.
///
/// * C1 on `φ <= max(φ, ψ)` and `min(φ, ψ) <= ψ`, plus `(φ, ψ)` itself when
///   ordered;
/// * C2 with the shifts in [`TRANSLATIONS`];
/// * C3 for every `λ` in `lambdas`;
/// * C4 with the coboundary of the vertex function read off `ψ`, in both
///   directions. Skipped for the sup-norm instance, which does not satisfy it.
pub fn axiom_check<T: Real>(
    gamma: &PressureEvaluation<T>,
    samples: &[(PotentialVector<T>, PotentialVector<T>)],
    lambdas: &[T],
    tol: T,
) -> Result<AxiomReport<T>> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("axiom_check needs at least two samples".into()));
    }
    let g = &gamma.graph;
    let mut summary: BTreeMap<Axiom, AxiomSummary<T>> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut record = |axiom: Axiom, sample: usize, lhs: T, rhs: T, equality: bool| {
        let residual = if equality { (lhs - rhs).abs() } else { lhs - rhs };
        let entry = summary.entry(axiom).or_insert(AxiomSummary { checked: 0, failed: 0, worst_residual: T::neg_infinity() });
        entry.checked += 1;
        entry.worst_residual = entry.worst_residual.max(residual);
        if residual > tol {
            entry.failed += 1;
            failures.push(AxiomFailure { axiom, sample, lhs, rhs });
        }
    };
    for (i, (phi, psi)) in samples.iter().enumerate() {
        let gp = gamma.evaluate(phi)?;
        let gq = gamma.evaluate(psi)?;

        let upper = phi.zip_with(psi, g, |a, b| a.max(b));
        let lower = phi.zip_with(psi, g, |a, b| a.min(b));
        let gp_lifted = gamma.evaluate(&phi.zip_with(psi, g, |a, _| a))?;
        let gq_lifted = gamma.evaluate(&phi.zip_with(psi, g, |_, b| b))?;
        record(Axiom::Monotonicity, i, gp_lifted, gamma.evaluate(&upper)?, false);
        record(Axiom::Monotonicity, i, gamma.evaluate(&lower)?, gq_lifted, false);
        if phi.depth == psi.depth && phi.values.iter().zip(&psi.values).all(|(a, b)| a <= b) {
            record(Axiom::Monotonicity, i, gp, gq, false);
        }

        for &c in &TRANSLATIONS {
            let c = T::of_f64(c);
            record(Axiom::TranslationInvariance, i, gamma.evaluate(&phi.add_constant(c))?, gp + c, true);
        }

        for &lam in lambdas {
            let mix = phi.zip_with(psi, g, |a, b| lam * a + (T::one() - lam) * b);
            record(Axiom::Convexity, i, gamma.evaluate(&mix)?, lam * gp_lifted + (T::one() - lam) * gq_lifted, false);
        }

        if gamma.kind != PressureKind::SupNorm {
            let vertex_fn: Vec<T> = match psi.depth {
                PotentialDepth::Vertex => psi.values.clone(),
                PotentialDepth::Edge => {
                    (0..g.len()).map(|u| psi.values[g.edge_index(u, g.successors(u)[0]).expect("edge")]).collect()
                }
            };
            for forward in [true, false] {
                let moved = phi.add_coboundary(g, &vertex_fn, forward);
                record(Axiom::CohomologyInvariance, i, gamma.evaluate(&moved)?, gp, true);
            }
        }
    }
    let passed = failures.is_empty();
    Ok(AxiomReport { kind: gamma.kind, summary, failures, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn golden() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    #[test]
    fn spectral_examples() {
        let full = fixtures::full_shift(2, 0.0);
        let zero = PotentialVector::vertex(vec![0.0, 0.0]);
        assert!((spectral_pressure(&full, &zero).unwrap() - 2f64.ln()).abs() < 1e-12);
        let gm = fixtures::golden_mean([0.0, 0.0]);
        assert!((spectral_pressure(&gm, &zero).unwrap() - golden().ln()).abs() < 1e-12);
        assert!((spectral_pressure(&gm, &zero).unwrap() - 0.481212).abs() < 1e-6);
        let phi = PotentialVector::vertex(vec![3f64.ln(), 0.0]);
        assert!((spectral_pressure(&full, &phi).unwrap() - 4f64.ln()).abs() < 1e-12);
        // same function as an edge potential
        let g = trim_and_recode(&full).unwrap();
        let pe = PressureEvaluation::from_graph(PressureKind::Spectral, g.clone()).unwrap();
        assert!((pe.evaluate(&phi.to_edges(&g)).unwrap() - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn spectral_refuses_reducible() {
        let sys = fixtures::three_point_system(0.25);
        assert!(matches!(PressureEvaluation::new(PressureKind::Spectral, &sys), Err(Error::Reducible { components: 2 })));
        assert!(PressureEvaluation::new(PressureKind::MaxErgodic, &sys).is_ok());
    }

    #[test]
    fn other_instances() {
        let sys = fixtures::three_point_system(0.25);
        let g = trim_and_recode(&sys).unwrap();
        let phi = PotentialVector::vertex(g.weights().to_vec());
        assert_eq!(sup_pressure(&phi), 1.0);
        assert_eq!(max_ergodic_pressure(&g, &phi).unwrap(), 0.5);
        let c = PotentialVector::vertex(vec![-0.75; 3]);
        assert_eq!(sup_pressure(&c), -0.75);
        assert_eq!(max_ergodic_pressure(&g, &c).unwrap(), -0.75);
        // edge potential: only the 2-cycle edges matter
        assert_eq!(max_ergodic_pressure(&g, &PotentialVector::edge(vec![1.0, 3.0, 9.0])).unwrap(), 2.0);
    }

    #[test]
    fn max_ergodic_coboundary_invariance() {
        let g = trim_and_recode(&fixtures::three_point_system(0.25)).unwrap();
        let pe = PressureEvaluation::from_graph(PressureKind::MaxErgodic, g.clone()).unwrap();
        let phi = pe.graph_potential();
        let moved = phi.add_coboundary(&g, &[1.0, 0.0, 0.0], true);
        assert_eq!(pe.evaluate(&moved).unwrap(), 0.5);
        assert_eq!(pe.evaluate(&phi.add_coboundary(&g, &[1.0, 0.0, 0.0], false)).unwrap(), 0.5);
    }

    #[test]
    fn gibbs_examples() {
        let full = PressureEvaluation::new(PressureKind::Spectral, &fixtures::full_shift(2, 0.0)).unwrap();
        let mu = gibbs_chain(&full, &full.graph_potential()).unwrap();
        for row in &mu.transitions {
            assert!(row.iter().all(|&p: &f64| (p - 0.5).abs() < 1e-12));
        }
        assert!(mu.stationary.iter().all(|&p: &f64| (p - 0.5).abs() < 1e-12));

        let gm = PressureEvaluation::new(PressureKind::Spectral, &fixtures::golden_mean([0.0, 0.0])).unwrap();
        let mu = gibbs_chain(&gm, &gm.graph_potential()).unwrap();
        let g = golden();
        assert!((mu.transitions[0][0] - 1.0 / g).abs() < 1e-12);
        assert!((mu.transitions[0][1] - 1.0 / (g * g)).abs() < 1e-12);
        assert!(mu.stationarity_residual() <= 1e-10);
        let sup = PressureEvaluation::new(PressureKind::SupNorm, &fixtures::golden_mean([0.0, 0.0])).unwrap();
        assert!(gibbs_chain(&sup, &sup.graph_potential()).is_err());
    }

    #[test]
    fn a_gamma_membership() {
        let pe = PressureEvaluation::new(PressureKind::Spectral, &fixtures::full_shift(2, 0.0)).unwrap();
        let one = PotentialVector::vertex(vec![1.0, 1.0]);
        let (inside, v) = in_a_gamma(&pe, &one, 0.0).unwrap();
        assert!(inside && (v - (2f64.ln() - 1.0)).abs() < 1e-12);
        let (inside, v) = in_a_gamma(&pe, &one.neg(), 0.0).unwrap();
        assert!(!inside && (v - (2f64.ln() + 1.0)).abs() < 1e-12);
        // ξ = Γ(φ) − φ sits on the boundary of A_Γ
        let phi = PotentialVector::vertex(vec![0.3, -1.1]);
        let gp = pe.evaluate(&phi).unwrap();
        let xi = phi.map(|v| gp - v);
        let (_, v) = in_a_gamma(&pe, &xi, 1e-12).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn sup_translation_exact() {
        let g = trim_and_recode(&fixtures::golden_mean([0.0, 0.0])).unwrap();
        let pe = PressureEvaluation::from_graph(PressureKind::SupNorm, g).unwrap();
        let phi = PotentialVector::vertex(vec![0.25, -3.0]);
        assert_eq!(pe.evaluate(&phi.add_constant(5.0)).unwrap(), pe.evaluate(&phi).unwrap() + 5.0);
        let samples = vec![(phi.clone(), phi.add_constant(1.0)), (phi.neg(), phi)];
        let rep = axiom_check(&pe, &samples, &[0.3], 0.0).unwrap();
        assert!(rep.passed);
        assert!(!rep.summary.contains_key(&Axiom::CohomologyInvariance));
        assert!(axiom_check(&pe, &samples[..1], &[0.3], 0.0).is_err());
    }
}
