use serde::Serialize;

use super::conjugate::{conjugate, ConjugateMethod};
use super::{flatten, grid_spacing, unflatten, ExtReal, GridConvexFunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FenchelReport<T> {
    /// `min_x f(x) + g(x)` over the common grid.
    pub primal: ExtReal<T>,
    pub primal_at: Option<Vec<T>>,
    /// `max_y −f*(y) − g*(−y)` over the dual grid.
    pub dual: T,
    pub dual_at: Vec<T>,
    /// `primal − dual`; `+∞` when `f + g` is identically `+∞`.
    pub gap: ExtReal<T>,
    /// Some node has `f` and `g` finite and one of them finite on all its
    /// grid neighbours.
    pub qualified: bool,
    /// `h · lipschitz + 1e-9` with `h` the largest primal grid spacing.
    pub tolerance: T,
    pub within_tolerance: bool,
}

fn neighbours_finite<T: Scalar>(f: &GridConvexFunction<T>, k: usize) -> bool {
    let shape = f.shape();
    let idx = unflatten(&shape, k);
    (0..shape.len()).all(|d| {
        if idx[d] == 0 || idx[d] + 1 == shape[d] {
            return false;
        }
        [idx[d] - 1, idx[d] + 1].iter().all(|&j| {
            let mut nb = idx.clone();
            nb[d] = j;
            f.values[flatten(&shape, &nb)].is_finite()
        })
    })
}

/// Fenchel–Rockafellar duality on grids: compares `inf (f + g)` with
/// `sup (−f*(y) − g*(−y))`.
pub fn fr_duality_gap<T: Scalar>(
    f: &GridConvexFunction<T>,
    g: &GridConvexFunction<T>,
    dual_grid: Vec<Vec<T>>,
    lipschitz: T,
) -> Result<FenchelReport<T>> {
    if f.grid != g.grid {
        return Err(Error::InvalidArgument("f and g must share a grid".into()));
    }
    let mut primal = ExtReal::PosInf;
    let mut primal_k = None;
    let mut qualified = false;
    for k in 0..f.len() {
        let s = f.values[k].add(g.values[k]);
        if s < primal {
            primal = s;
            primal_k = Some(k);
        }
        if s.is_finite() && (neighbours_finite(f, k) || neighbours_finite(g, k)) {
            qualified = true;
        }
    }
    let negated: Vec<Vec<T>> = dual_grid.iter().map(|a| a.iter().rev().map(|&y| -y).collect()).collect();
    let fs = conjugate(f, dual_grid.clone(), ConjugateMethod::LowerEnvelope)?;
    let gs = conjugate(g, negated, ConjugateMethod::LowerEnvelope)?;
    let shape: Vec<usize> = dual_grid.iter().map(Vec::len).collect();
    let mut best: Option<(T, usize)> = None;
    for k in 0..fs.function.len() {
        let idx = unflatten(&shape, k);
        let mirrored: Vec<usize> = idx.iter().zip(&shape).map(|(&i, &n)| n - 1 - i).collect();
        let fy = fs.function.values[k].finite().expect("conjugate is finite");
        let gy = gs.function.values[flatten(&shape, &mirrored)].finite().expect("conjugate is finite");
        let v = -fy - gy;
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, k));
        }
    }
    let (dual, dual_k) = best.expect("dual grid is nonempty");
    let gap = primal.checked_sub(ExtReal::Finite(dual))?;
    let tolerance = grid_spacing(&f.grid) * lipschitz + T::of_f64(1e-9);
    let within_tolerance = gap.finite().is_some_and(|g| g.abs() <= tolerance);
    Ok(FenchelReport {
        primal,
        primal_at: primal_k.filter(|_| primal.is_finite()).map(|k| f.node(k)),
        dual,
        dual_at: fs.function.node(dual_k),
        gap,
        qualified,
        tolerance,
        within_tolerance,
    })
}
