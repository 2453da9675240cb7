use serde::{Deserialize, Serialize};

use super::{dot, flatten, nodes, unflatten, ExtReal, GridConvexFunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugateMethod {
    /// Every primal node against every dual node.
    BruteForce,
    /// Lower convex hull per axis, then a monotone pointer walk.
    LowerEnvelope,
}

/// `f*` sampled on a dual grid, with the primal node attaining each value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conjugate<T> {
    pub function: GridConvexFunction<T>,
    pub argmax: Vec<Vec<T>>,
    /// The maximizer is an outermost primal node and moving inward strictly
    /// lowers the objective: a wider grid might give a larger value.
    pub boundary: Vec<bool>,
}

/// `f*(y) = max_x ⟨x, y⟩ − f(x)` over the grid nodes of `f`. Ties go to the
/// maximizer that comes last in storage order.
pub fn conjugate<T: Scalar>(f: &GridConvexFunction<T>, dual_grid: Vec<Vec<T>>, method: ConjugateMethod) -> Result<Conjugate<T>> {
    super::check_grid(&dual_grid)?;
    if dual_grid.len() != f.dims() {
        return Err(Error::Dimension { expected: f.dims(), got: dual_grid.len() });
    }
    let best = match method {
        ConjugateMethod::BruteForce => brute_force(f, &dual_grid),
        ConjugateMethod::LowerEnvelope => envelope(f, &dual_grid),
    };
    let ys: Vec<Vec<T>> = nodes(&dual_grid).collect();
    let boundary = ys.iter().zip(&best).map(|(y, &(_, k))| at_boundary(f, y, k)).collect();
    let argmax = best.iter().map(|&(_, k)| f.node(k)).collect();
    let values = best.into_iter().map(|(v, _)| ExtReal::Finite(v)).collect();
    Ok(Conjugate { function: GridConvexFunction::new(dual_grid, values)?, argmax, boundary })
}

fn objective<T: Scalar>(f: &GridConvexFunction<T>, x: &[T], y: &[T], k: usize) -> Option<T> {
    f.values[k].finite().map(|fx| dot(x, y) - fx)
}

fn brute_force<T: Scalar>(f: &GridConvexFunction<T>, dual_grid: &[Vec<T>]) -> Vec<(T, usize)> {
    let xs: Vec<Vec<T>> = nodes(&f.grid).collect();
    nodes(dual_grid)
        .map(|y| {
            let mut best: Option<(T, usize)> = None;
            for (k, x) in xs.iter().enumerate() {
                if let Some(v) = objective(f, x, &y, k) {
                    if best.is_none_or(|(b, _)| v >= b) {
                        best = Some((v, k));
                    }
                }
            }
            best.expect("proper function has a finite node")
        })
        .collect()
}

/// Indices of the lower convex hull of the finite points, left to right.
/// Points in the relative interior of a hull edge are dropped.
pub(crate) fn lower_hull<T: Scalar>(xs: &[T], fs: &[ExtReal<T>]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for (i, fi) in fs.iter().enumerate() {
        let Some(fi) = fi.finite() else { continue };
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let (fo, fa) = (fs[o].finite().expect("hull"), fs[a].finite().expect("hull"));
            let cross = (xs[a] - xs[o]) * (fi - fo) - (fa - fo) * (xs[i] - xs[o]);
            if cross <= T::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// One-dimensional conjugate on increasing `ys`; `None` when `fs` is
/// identically `+∞`.
fn envelope_line<T: Scalar>(xs: &[T], fs: &[ExtReal<T>], ys: &[T]) -> Option<Vec<(T, usize)>> {
    let hull = lower_hull(xs, fs);
    if hull.is_empty() {
        return None;
    }
    let obj = |p: usize, y: T| xs[hull[p]] * y - fs[hull[p]].finite().expect("hull");
    let mut p = 0;
    Some(
        ys.iter()
            .map(|&y| {
                while p + 1 < hull.len() && obj(p + 1, y) >= obj(p, y) {
                    p += 1;
                }
                (obj(p, y), hull[p])
            })
            .collect(),
    )
}

fn envelope<T: Scalar>(f: &GridConvexFunction<T>, dual_grid: &[Vec<T>]) -> Vec<(T, usize)> {
    if f.dims() == 1 {
        return envelope_line(&f.grid[0], &f.values, &dual_grid[0]).expect("proper");
    }
    // f*(y1, y2) = max_x1 (x1 y1 + f(x1, ·)*(y2))
    let (n1, n2) = (f.grid[0].len(), f.grid[1].len());
    let (m1, m2) = (dual_grid[0].len(), dual_grid[1].len());
    let rows: Vec<Option<Vec<(T, usize)>>> =
        (0..n1).map(|i| envelope_line(&f.grid[1], &f.values[i * n2..(i + 1) * n2], &dual_grid[1])).collect();
    let mut out = vec![(T::zero(), 0); m1 * m2];
    for j in 0..m2 {
        let h: Vec<ExtReal<T>> = rows
            .iter()
            .map(|r| match r {
                Some(r) => ExtReal::Finite(-r[j].0),
                None => ExtReal::PosInf,
            })
            .collect();
        let col = envelope_line(&f.grid[0], &h, &dual_grid[0]).expect("proper");
        for (l, (v, i)) in col.into_iter().enumerate() {
            let inner = rows[i].as_ref().expect("finite row")[j].1;
            out[l * m2 + j] = (v, i * n2 + inner);
        }
    }
    out
}

fn at_boundary<T: Scalar>(f: &GridConvexFunction<T>, y: &[T], k: usize) -> bool {
    let shape = f.shape();
    let idx = unflatten(&shape, k);
    let here = objective(f, &f.node(k), y, k).expect("maximizer is finite");
    (0..shape.len()).any(|d| {
        let inward = if idx[d] == 0 {
            1
        } else if idx[d] + 1 == shape[d] {
            idx[d] - 1
        } else {
            return false;
        };
        let mut nb = idx.clone();
        nb[d] = inward;
        let kk = flatten(&shape, &nb);
        objective(f, &f.node(kk), y, kk).is_none_or(|v| v < here)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiconjugateReport<T> {
    pub biconjugate: GridConvexFunction<T>,
    /// Dual grid used for `f*`: the hull slopes, padded by one on each side.
    pub dual_grid: Vec<T>,
    /// `max (f** − f)` over nodes where `f` is finite; never positive beyond
    /// rounding.
    pub max_excess: T,
    /// `max (f − f**)` over nodes where `f` is finite.
    pub max_deviation: T,
    pub convex: bool,
    /// `max |(f**)** − f**|`.
    pub idempotence_error: T,
    pub idempotent: bool,
}

/// `f**` on the grid of a one-dimensional `f`, with `+∞` outside the
/// hull of the effective domain.
fn biconjugate_1d<T: Scalar>(f: &GridConvexFunction<T>) -> Result<(GridConvexFunction<T>, Vec<T>)> {
    let xs = &f.grid[0];
    let hull = lower_hull(xs, &f.values);
    let fv = |i: usize| f.values[i].finite().expect("hull node is finite");
    let slopes: Vec<T> = hull.windows(2).map(|w| (fv(w[1]) - fv(w[0])) / (xs[w[1]] - xs[w[0]])).collect();
    let mut dual = Vec::with_capacity(slopes.len() + 2);
    match (slopes.first(), slopes.last()) {
        (Some(&lo), Some(&hi)) => {
            dual.push(lo - T::one());
            // rounding can merge neighbouring slopes
            for &s in &slopes {
                if dual.last().is_none_or(|&last| s > last) {
                    dual.push(s);
                }
            }
            dual.push(hi.max_of(*dual.last().expect("nonempty")) + T::one());
        }
        _ => dual.extend([-T::one(), T::one()]),
    }
    let fstar = conjugate(f, vec![dual.clone()], ConjugateMethod::LowerEnvelope)?;
    let fss = conjugate(&fstar.function, vec![xs.clone()], ConjugateMethod::LowerEnvelope)?;
    let (lo, hi) = (hull[0], *hull.last().expect("nonempty"));
    let values = fss
        .function
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| if (lo..=hi).contains(&i) { v } else { ExtReal::PosInf })
        .collect();
    Ok((GridConvexFunction::new(f.grid.clone(), values)?, dual))
}

/// Fenchel–Moreau check on a one-dimensional grid function.
pub fn biconjugate_check<T: Scalar>(f: &GridConvexFunction<T>, tol: T) -> Result<BiconjugateReport<T>> {
    if f.dims() != 1 {
        return Err(Error::InvalidArgument("biconjugate_check works on one-dimensional grids".into()));
    }
    let (fss, dual_grid) = biconjugate_1d(f)?;
    let mut max_excess: Option<T> = None;
    let mut max_deviation = T::zero();
    // f is +∞ somewhere inside the hull of its domain
    let mut domain_gap = false;
    for (a, b) in f.values.iter().zip(&fss.values) {
        match (a.finite(), b.finite()) {
            (Some(a), Some(b)) => {
                max_excess = Some(max_excess.map_or(b - a, |m| m.max_of(b - a)));
                max_deviation = max_deviation.max_of(a - b);
            }
            (None, Some(_)) => domain_gap = true,
            _ => {}
        }
    }
    let max_excess = max_excess.expect("f is proper");
    let (fssss, _) = biconjugate_1d(&fss)?;
    let mut idempotence_error = T::zero();
    let mut same_domain = true;
    for (a, b) in fss.values.iter().zip(&fssss.values) {
        match (a.finite(), b.finite()) {
            (Some(a), Some(b)) => idempotence_error = idempotence_error.max_of((a - b).abs()),
            (None, None) => {}
            _ => same_domain = false,
        }
    }
    Ok(BiconjugateReport {
        convex: !domain_gap && max_deviation <= tol,
        idempotent: same_domain && idempotence_error <= tol,
        biconjugate: fss,
        dual_grid,
        max_excess,
        max_deviation,
        idempotence_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn fin(x: f64) -> ExtReal<f64> {
        ExtReal::Finite(x)
    }

    fn axis(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
    }

    #[test]
    fn half_quadratic_is_self_conjugate() {
        let f = GridConvexFunction::from_fn(vec![axis(-3.0, 3.0, 61)], |x| fin(x[0] * x[0] / 2.0)).unwrap();
        let ys = axis(-2.0, 2.0, 41);
        let c = conjugate(&f, vec![ys.clone()], ConjugateMethod::LowerEnvelope).unwrap();
        for (y, v) in ys.iter().zip(&c.function.values) {
            assert!((v.finite().unwrap() - y * y / 2.0).abs() <= 5e-3);
        }
        assert!(c.boundary.iter().all(|&b| !b));
    }

    #[test]
    fn indicator_gives_support_function() {
        let f = GridConvexFunction::from_fn(vec![axis(-3.0, 3.0, 61)], |x| {
            if x[0].abs() <= 1.0 + 1e-12 {
                fin(0.0)
            } else {
                ExtReal::PosInf
            }
        })
        .unwrap();
        let ys = axis(-4.0, 4.0, 17);
        for method in [ConjugateMethod::BruteForce, ConjugateMethod::LowerEnvelope] {
            let c = conjugate(&f, vec![ys.clone()], method).unwrap();
            for (y, v) in ys.iter().zip(&c.function.values) {
                assert!((v.finite().unwrap() - y.abs()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hinge_conjugate_and_boundary_flag() {
        let f = GridConvexFunction::from_fn(vec![axis(-2.0, 4.0, 61)], |x| fin((x[0] - 1.0).max(0.0))).unwrap();
        let ys = axis(-1.0, 2.0, 31);
        let c = conjugate(&f, vec![ys.clone()], ConjugateMethod::BruteForce).unwrap();
        for ((y, v), flag) in ys.iter().zip(&c.function.values).zip(&c.boundary) {
            let inside = (-1e-12..=1.0 + 1e-12).contains(y);
            if inside {
                assert!((v.finite().unwrap() - y).abs() < 1e-12, "y = {y}");
            }
            assert_eq!(*flag, !inside, "y = {y}");
        }
    }

    #[test]
    fn methods_agree_in_two_dimensions() {
        let g = vec![axis(-1.0, 1.0, 9), axis(-2.0, 1.0, 7)];
        let f = GridConvexFunction::from_fn(g, |x| {
            if x[0] + x[1] > 0.5 {
                ExtReal::PosInf
            } else {
                fin(x[0] * x[0] + (x[0] - x[1]).abs() + 0.3 * x[1])
            }
        })
        .unwrap();
        let dual = vec![axis(-3.0, 3.0, 13), axis(-2.0, 2.0, 5)];
        let a = conjugate(&f, dual.clone(), ConjugateMethod::BruteForce).unwrap();
        let b = conjugate(&f, dual, ConjugateMethod::LowerEnvelope).unwrap();
        for (x, y) in a.function.values.iter().zip(&b.function.values) {
            assert!((x.finite().unwrap() - y.finite().unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_conjugate_on_rationals() {
        let r = |n: i64, d: i64| Rational64::new(n, d);
        let xs: Vec<Rational64> = (-4..=4).map(|i| r(i, 2)).collect();
        let f = GridConvexFunction::from_fn(vec![xs], |x| ExtReal::Finite(x[0] * x[0])).unwrap();
        let ys = vec![r(-1, 1), r(1, 3), r(2, 1)];
        let a = conjugate(&f, vec![ys.clone()], ConjugateMethod::BruteForce).unwrap();
        let b = conjugate(&f, vec![ys], ConjugateMethod::LowerEnvelope).unwrap();
        assert_eq!(a.function, b.function);
        let expect = [r(1, 4), r(0, 1), r(1, 1)];
        assert_eq!(a.function.values, expect.map(ExtReal::Finite).to_vec());
    }

    #[test]
    fn biconjugate_examples() {
        let xs = axis(-2.0, 2.0, 41);
        let abs = GridConvexFunction::from_fn(vec![xs.clone()], |x| fin(x[0].abs())).unwrap();
        let rep = biconjugate_check(&abs, 1e-12).unwrap();
        assert!(rep.convex && rep.max_deviation <= 1e-12 && rep.max_excess <= 1e-12);

        let wells = GridConvexFunction::from_fn(vec![xs.clone()], |x| fin(((x[0] + 1.0).powi(2)).min((x[0] - 1.0).powi(2)))).unwrap();
        let rep = biconjugate_check(&wells, 1e-12).unwrap();
        assert!(!rep.convex);
        assert!(rep.biconjugate.values[20].finite().unwrap().abs() < 1e-12);
        assert_eq!(wells.values[20], fin(1.0));
        assert!(rep.idempotent);

        let two = GridConvexFunction::from_fn(vec![xs], |x| {
            if (x[0].abs() - 1.0).abs() < 1e-9 {
                fin(0.0)
            } else {
                ExtReal::PosInf
            }
        })
        .unwrap();
        let rep = biconjugate_check(&two, 1e-12).unwrap();
        for (i, v) in rep.biconjugate.values.iter().enumerate() {
            if (10..=30).contains(&i) {
                assert!(v.finite().unwrap().abs() < 1e-12);
            } else {
                assert_eq!(*v, ExtReal::PosInf);
            }
        }
    }
}
