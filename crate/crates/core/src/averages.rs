//! Maximum ergodic average and the time-average quantities around it.
//!
//! For a locally constant potential on a subshift of finite type the
//! maximum of `∫φ dμ` over invariant measures is the maximum mean of a simple
//! cycle of the recoded graph. [`alpha_karp`] computes it with Karp's
//! recurrence, [`alpha_bruteforce`] by listing cycles. The remaining
//! functions evaluate `sup_x S_nφ(x)/n`, `inf_n S_nφ(x)/n` and friends exactly
//! on eventually periodic points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{canonical_rotation, cycle_mean, enumerate_simple_cycles, WeightedDigraph};
use crate::scalar::Scalar;
use crate::symbolic::{potential_along, EventuallyPeriodicPoint, SubshiftSystem};

/// Largest graph [`alpha_bruteforce`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMethod {
    Karp,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaResult<T> {
    pub value: T,
    /// Optimal simple cycle, starting at its smallest vertex.
    pub witness_cycle: Vec<usize>,
    pub method: AlphaMethod,
}

/// Picks the better of two candidate witnesses: larger mean, then the
/// lexicographically smaller vertex sequence.
fn better<T: Scalar>(best: &mut Option<(T, Vec<usize>)>, mean: T, cycle: Vec<usize>) {
    let replace = match best {
        None => true,
        Some((m, c)) => mean > *m || (mean == *m && cycle < *c),
    };
    if replace {
        *best = Some((mean, cycle));
    }
}

/// Maximum cycle mean by Karp's recurrence, run on every strongly connected
/// component that carries a cycle.
pub fn alpha_karp<T: Scalar>(graph: &WeightedDigraph<T>) -> AlphaResult<T> {
    let mut best: Option<(T, Vec<usize>)> = None;
    let mut local = vec![usize::MAX; graph.len()];
    for comp in graph.strongly_connected_components() {
        if !graph.component_has_cycle(&comp) {
            continue;
        }
        for (i, &v) in comp.iter().enumerate() {
            local[v] = i;
        }
        let n = comp.len();
        // dist[k][i]: heaviest walk with k edges from comp[0] to comp[i]
        let mut dist: Vec<Vec<Option<T>>> = vec![vec![None; n]; n + 1];
        let mut pred: Vec<Vec<usize>> = vec![vec![usize::MAX; n]; n + 1];
        dist[0][0] = Some(T::zero());
        for k in 1..=n {
            for (i, &u) in comp.iter().enumerate() {
                let Some(du) = dist[k - 1][i] else { continue };
                let cand = du + graph.weight(u);
                for &v in graph.successors(u) {
                    let j = local[v];
                    if j == usize::MAX || comp[j] != v {
                        continue;
                    }
                    if dist[k][j].is_none_or(|d| cand > d) {
                        dist[k][j] = Some(cand);
                        pred[k][j] = i;
                    }
                }
            }
        }
        let mut ratio: Vec<Option<T>> = vec![None; n];
        for j in 0..n {
            let Some(dn) = dist[n][j] else { continue };
            ratio[j] = (0..n)
                .filter_map(|k| dist[k][j].map(|dk| (dn - dk) / T::of_count(n - k)))
                .reduce(T::min_of);
        }
        let Some(lambda) = ratio.iter().flatten().copied().reduce(T::max_of) else { continue };
        for j in (0..n).filter(|&j| ratio[j] == Some(lambda)) {
            let mut walk = vec![j];
            let mut cur = j;
            for k in (1..=n).rev() {
                cur = pred[k][cur];
                walk.push(cur);
            }
            walk.reverse();
            for cycle in cycles_in_walk(&walk) {
                let cycle: Vec<usize> = canonical_rotation(&cycle.iter().map(|&i| comp[i]).collect::<Vec<_>>());
                better(&mut best, cycle_mean(graph, &cycle), cycle);
            }
        }
        for &v in &comp {
            local[v] = usize::MAX;
        }
    }
    let (value, witness_cycle) = best.expect("a trimmed graph has a cycle");
    AlphaResult { value, witness_cycle, method: AlphaMethod::Karp }
}

/// Decomposes a walk into simple cycles by stack elimination.
fn cycles_in_walk(walk: &[usize]) -> Vec<Vec<usize>> {
    let mut stack: Vec<usize> = Vec::new();
    let mut cycles = Vec::new();
    for &v in walk {
        if let Some(pos) = stack.iter().position(|&u| u == v) {
            cycles.push(stack[pos..].to_vec());
            stack.truncate(pos);
        }
        stack.push(v);
    }
    cycles
}

/// Maximum mean over all simple cycles. Only for graphs with at most
/// [`BRUTE_FORCE_LIMIT`] vertices.
pub fn alpha_bruteforce<T: Scalar>(graph: &WeightedDigraph<T>) -> Result<AlphaResult<T>> {
    if graph.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::GraphTooLarge { vertices: graph.len(), limit: BRUTE_FORCE_LIMIT });
    }
    let mut best = None;
    for c in enumerate_simple_cycles(graph, graph.len()) {
        better(&mut best, c.mean, c.vertices);
    }
    let (value, witness_cycle) = best.ok_or(Error::EmptySubshift)?;
    Ok(AlphaResult { value, witness_cycle, method: AlphaMethod::BruteForce })
}

/// Heaviest walk weight for each walk length `1..=n`, i.e. `n·sup_x S_nφ(x)/n`.
fn heaviest_walks<T: Scalar>(graph: &WeightedDigraph<T>, n: usize) -> Vec<T> {
    // best[v]: heaviest walk with m vertices starting at v
    let mut best: Vec<T> = graph.weights().to_vec();
    let mut out = Vec::with_capacity(n);
    for m in 1..=n {
        if m > 1 {
            best = (0..graph.len())
                .map(|v| {
                    let tail = graph.successors(v).iter().map(|&u| best[u]).reduce(T::max_of).expect("trimmed");
                    graph.weight(v) + tail
                })
                .collect();
        }
        out.push(best.iter().copied().reduce(T::max_of).expect("nonempty"));
    }
    out
}

/// `sup_x S_nφ(x)/n`.
pub fn horizon_sup<T: Scalar>(graph: &WeightedDigraph<T>, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let total = *heaviest_walks(graph, n).last().expect("n >= 1");
    Ok(total / T::of_count(n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorizonTable<T> {
    /// `(n, sup_x S_nφ(x)/n)` for `n = 1..=N`.
    pub rows: Vec<(usize, T)>,
    pub running_inf: T,
    /// First `n` at which `running_inf` is reached.
    pub running_inf_at: usize,
    /// `|V|·(max φ − α)/N`; `running_inf − α` lies in `[0, error_bound]`.
    pub error_bound: T,
}

pub fn horizon_table<T: Scalar>(graph: &WeightedDigraph<T>, horizon: usize) -> Result<HorizonTable<T>> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let rows: Vec<(usize, T)> = heaviest_walks(graph, horizon)
        .into_iter()
        .enumerate()
        .map(|(i, total)| (i + 1, total / T::of_count(i + 1)))
        .collect();
    let (running_inf_at, running_inf) =
        rows.iter().copied().fold(rows[0], |acc, row| if row.1 < acc.1 { row } else { acc });
    let alpha = alpha_karp(graph).value;
    let error_bound = T::of_count(graph.len()) * (graph.max_weight() - alpha) / T::of_count(horizon);
    Ok(HorizonTable { rows, running_inf, running_inf_at, error_bound })
}

// ---------------------------------------------------------------------------
// Exact time averages of eventually periodic points

/// Extremes of `S_n/n` over all `n >= 1` for the sequence
/// `pre · period · period · …`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageExtremes<T> {
    pub inf: T,
    pub inf_attained_at: Option<usize>,
    pub limit: T,
    pub sup: T,
    pub sup_attained_at: Option<usize>,
}

/// With `n0 = |pre|`, `p = |period|` and `B` the period sum, every
/// `n = n0 + r + qp` (`0 <= r < p`, `q >= 1`) gives `(K_r + qB)/(n0 + r + qp)`,
/// which is monotone in `q`. The extremes over all `n` are therefore among
/// the values for `n < n0 + 2p` and the limit `B/p`.
pub fn average_extremes<T: Scalar>(pre: &[T], period: &[T]) -> AverageExtremes<T> {
    assert!(!period.is_empty(), "period must be nonempty");
    let p = period.len();
    let n0 = pre.len();
    let limit = period.iter().fold(T::zero(), |a, &b| a + b) / T::of_count(p);
    let mut sum = T::zero();
    let mut lo: Option<(usize, T)> = None;
    let mut hi: Option<(usize, T)> = None;
    for n in 1..n0 + 2 * p {
        let i = n - 1;
        sum = sum + if i < n0 { pre[i] } else { period[(i - n0) % p] };
        let avg = sum / T::of_count(n);
        if lo.is_none_or(|(_, v)| avg < v) {
            lo = Some((n, avg));
        }
        if hi.is_none_or(|(_, v)| avg > v) {
            hi = Some((n, avg));
        }
    }
    let (lo_n, lo_v) = lo.expect("at least one term");
    let (hi_n, hi_v) = hi.expect("at least one term");
    let (inf, inf_attained_at) = if limit < lo_v { (limit, None) } else { (lo_v, Some(lo_n)) };
    let (sup, sup_attained_at) = if limit > hi_v { (limit, None) } else { (hi_v, Some(hi_n)) };
    AverageExtremes { inf, inf_attained_at, limit, sup, sup_attained_at }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeAverageProfile<T> {
    pub point: EventuallyPeriodicPoint,
    pub inf_over_n: T,
    /// `None` when the infimum is the unattained limit.
    pub inf_attained_at: Option<usize>,
    pub liminf: T,
    pub limsup: T,
    pub sup_over_n: T,
}

impl<T: Scalar> TimeAverageProfile<T> {
    fn from_extremes(point: EventuallyPeriodicPoint, e: AverageExtremes<T>) -> Self {
        Self {
            point,
            inf_over_n: e.inf,
            inf_attained_at: e.inf_attained_at,
            liminf: e.limit,
            limsup: e.limit,
            sup_over_n: e.sup,
        }
    }
}

/// `inf_n S_nφ(x)/n`, `liminf`, `limsup` and `sup_n` for an eventually
/// periodic point, computed exactly.
pub fn exact_inf_time_average<T: Scalar>(
    point: &EventuallyPeriodicPoint,
    system: &SubshiftSystem<T>,
) -> Result<TimeAverageProfile<T>> {
    point.validate(system)?;
    let n0 = point.preperiod.len();
    let p = point.period.len();
    let values = potential_along(point, n0 + p, system);
    let e = average_extremes(&values[..n0], &values[n0..]);
    Ok(TimeAverageProfile::from_extremes(point.clone(), e))
}

/// Profile of the periodic point that walks a closed walk of the graph.
pub fn cycle_profile<T: Scalar>(graph: &WeightedDigraph<T>, closed_walk: &[usize]) -> TimeAverageProfile<T> {
    let weights: Vec<T> = closed_walk.iter().map(|&v| graph.weight(v)).collect();
    TimeAverageProfile::from_extremes(graph.point_of_cycle(closed_walk), average_extremes(&[], &weights))
}

/// Profiles of every rotation of every simple cycle up to `max_cycle_len`.
pub fn periodic_profiles<T: Scalar>(graph: &WeightedDigraph<T>, max_cycle_len: usize) -> Vec<(Vec<usize>, TimeAverageProfile<T>)> {
    enumerate_simple_cycles(graph, max_cycle_len)
        .iter()
        .flat_map(|c| c.rotations().map(|r| {
            let prof = cycle_profile(graph, &r);
            (r, prof)
        }).collect::<Vec<_>>())
        .collect()
}

/// `sup_x inf_n S_nφ(x)/n` over periodic points on simple cycles of length
/// at most `max_cycle_len`.
pub fn sup_inf_over_periodic<T: Scalar>(graph: &WeightedDigraph<T>, max_cycle_len: usize) -> Result<T> {
    periodic_profiles(graph, max_cycle_len.max(1))
        .into_iter()
        .map(|(_, p)| p.inf_over_n)
        .reduce(T::max_of)
        .ok_or(Error::Empty("no cycle within the length cap"))
}

/// `(sup_x sup_n, inf_x inf_n)` of `S_nφ(x)/n` over the same periodic points.
pub fn supsup_infinf_diagnostics<T: Scalar>(graph: &WeightedDigraph<T>, max_cycle_len: usize) -> Result<(T, T)> {
    let profiles = periodic_profiles(graph, max_cycle_len.max(1));
    let sup = profiles.iter().map(|(_, p)| p.sup_over_n).reduce(T::max_of);
    let inf = profiles.iter().map(|(_, p)| p.inf_over_n).reduce(T::min_of);
    sup.zip(inf).ok_or(Error::Empty("no cycle within the length cap"))
}

/// Rotation of a cycle with the largest `inf_n` (first one on ties).
pub fn best_rotation<T: Scalar>(graph: &WeightedDigraph<T>, cycle: &[usize]) -> (Vec<usize>, T) {
    let mut best: Option<(Vec<usize>, T)> = None;
    for r in 0..cycle.len() {
        let mut rot = cycle.to_vec();
        rot.rotate_left(r);
        let inf = cycle_profile(graph, &rot).inf_over_n;
        if best.as_ref().is_none_or(|(_, b)| inf > *b) {
            best = Some((rot, inf));
        }
    }
    best.expect("nonempty cycle")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimaxCheck<T> {
    pub inf_of_row_sups: T,
    pub sup_of_col_infs: T,
    pub holds: bool,
}

/// Checks `min_i max_j F[i][j] >= max_j min_i F[i][j]` on a finite matrix.
pub fn minimax_inequality_check<T: Scalar>(matrix: &[Vec<T>]) -> Result<MinimaxCheck<T>> {
    let cols = matrix.first().map(Vec::len).unwrap_or(0);
    if matrix.is_empty() || cols == 0 {
        return Err(Error::Empty("matrix"));
    }
    if let Some(bad) = matrix.iter().find(|r| r.len() != cols) {
        return Err(Error::Dimension { expected: cols, got: bad.len() });
    }
    let inf_of_row_sups = matrix
        .iter()
        .map(|r| r.iter().copied().reduce(T::max_of).expect("nonempty row"))
        .reduce(T::min_of)
        .expect("nonempty");
    let sup_of_col_infs = (0..cols)
        .map(|j| matrix.iter().map(|r| r[j]).reduce(T::min_of).expect("nonempty col"))
        .reduce(T::max_of)
        .expect("nonempty");
    Ok(MinimaxCheck { inf_of_row_sups, sup_of_col_infs, holds: inf_of_row_sups >= sup_of_col_infs })
}
