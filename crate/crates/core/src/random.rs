//! Seeded generators for test and benchmark instances.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::averages::BRUTE_FORCE_LIMIT;
use crate::graph::{trim_and_recode, WeightedDigraph};
use crate::pressure::{PotentialDepth, PotentialVector};
use crate::symbolic::{LocallyConstantPotential, SubshiftSystem, Word};

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn words_of_depth(transition: &[Vec<i64>], depth: usize) -> Vec<Word> {
    let n = transition.len();
    let mut words: Vec<Word> = (0..n).map(|s| vec![s]).collect();
    for _ in 1..depth {
        words = words
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().expect("nonempty");
                (0..n).filter(move |&s| transition[last][s] == 1).map(move |s| {
                    let mut next = w.clone();
                    next.push(s);
                    next
                })
            })
            .collect();
    }
    words
}

fn with_uniform_weights<R: Rng + ?Sized>(transition: Vec<Vec<i64>>, depth: usize, rng: &mut R) -> SubshiftSystem<f64> {
    let values: BTreeMap<Word, f64> =
        words_of_depth(&transition, depth).into_iter().map(|w| (w, rng.gen_range(-1.0..=1.0))).collect();
    let potential = LocallyConstantPotential { depth, values, default: 0.0 };
    SubshiftSystem::new(labels(transition.len()), transition, potential).expect("generated system is valid")
}

/// Drops symbols without an infinite forward path.
fn restrict_to_alive(transition: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = transition.len();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            if alive[i] && !(0..n).any(|j| alive[j] && transition[i][j] == 1) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    keep.iter().map(|&i| keep.iter().map(|&j| transition[i][j]).collect()).collect()
}

/// Trimmed system with 3–10 symbols, depth 1 or 2 and weights in `[−1, 1]`,
/// small enough that its recoded graph stays within the brute-force limit.
pub fn random_system<R: Rng + ?Sized>(rng: &mut R) -> SubshiftSystem<f64> {
    loop {
        let n = rng.gen_range(3..=10);
        let depth = rng.gen_range(1..=2);
        let density = if depth == 1 { rng.gen_range(0.15..0.6) } else { rng.gen_range(1.0..1.6) / n as f64 };
        let raw: Vec<Vec<i64>> =
            (0..n).map(|_| (0..n).map(|_| i64::from(rng.gen_bool(density.min(1.0)))).collect()).collect();
        let transition = restrict_to_alive(&raw);
        if transition.len() < 3 {
            continue;
        }
        let system = with_uniform_weights(transition, depth, rng);
        match trim_and_recode(&system) {
            Ok(g) if g.len() <= BRUTE_FORCE_LIMIT => return system,
            _ => continue,
        }
    }
}

/// Irreducible system on 2..=`max_symbols` symbols: a random Hamiltonian
/// cycle plus extra transitions, depth 1 or 2, weights in `[−1, 1]`.
pub fn random_irreducible_system<R: Rng + ?Sized>(rng: &mut R, max_symbols: usize) -> SubshiftSystem<f64> {
    let n = rng.gen_range(2..=max_symbols.max(2));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut transition = vec![vec![0i64; n]; n];
    for i in 0..n {
        transition[order[i]][order[(i + 1) % n]] = 1;
    }
    let extra = rng.gen_range(0.0..0.6);
    for row in transition.iter_mut() {
        for entry in row.iter_mut() {
            if rng.gen_bool(extra) {
                *entry = 1;
            }
        }
    }
    let depth = rng.gen_range(1..=2);
    with_uniform_weights(transition, depth, rng)
}

/// Uniform potential vector on the vertices or edges of `graph`.
pub fn random_potential<T, R: Rng + ?Sized>(graph: &WeightedDigraph<T>, depth: PotentialDepth, scale: f64, rng: &mut R) -> PotentialVector<f64>
where
    T: crate::scalar::Scalar,
{
    let n = match depth {
        PotentialDepth::Vertex => graph.len(),
        PotentialDepth::Edge => graph.edges().len(),
    };
    PotentialVector { depth, values: (0..n).map(|_| rng.gen_range(-scale..=scale)).collect() }
}

pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect()
}
