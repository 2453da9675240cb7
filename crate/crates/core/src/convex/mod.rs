//! Legendre–Fenchel conjugates and duality on finite grids.

mod bilinear;
mod conjugate;
mod fenchel;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use bilinear::{bilinear_minimax, bilinear_minimax_with, BilinearGame, BilinearReport, EXACT_SIMPLEX_DIM, HEDGE_ITERATIONS};
pub use conjugate::{biconjugate_check, conjugate, BiconjugateReport, Conjugate, ConjugateMethod};
pub use fenchel::{fr_duality_gap, FenchelReport};

/// A real number or `+∞`.
///
/// Addition lets `+∞` absorb everything. Subtraction that would produce
/// `−∞` or the undefined `∞ − ∞` is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtReal<T> {
    Finite(T),
    PosInf,
}

impl<T: Scalar> ExtReal<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::PosInf => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::PosInf,
        }
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => Ok(ExtReal::Finite(a - b)),
            (ExtReal::PosInf, ExtReal::Finite(_)) => Ok(ExtReal::PosInf),
            _ => Err(Error::InfMinusInf),
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl<T: Scalar> From<T> for ExtReal<T> {
    fn from(x: T) -> Self {
        ExtReal::Finite(x)
    }
}

impl<T: Scalar> PartialOrd for ExtReal<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::Finite(_), ExtReal::PosInf) => Some(Ordering::Less),
            (ExtReal::PosInf, ExtReal::Finite(_)) => Some(Ordering::Greater),
            (ExtReal::PosInf, ExtReal::PosInf) => Some(Ordering::Equal),
        }
    }
}

impl<T: fmt::Display> fmt::Display for ExtReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => x.fmt(f),
            ExtReal::PosInf => f.write_str("+inf"),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ExtRealRepr<T> {
    Number(T),
    Text(String),
}

impl<T: Serialize> Serialize for ExtReal<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => x.serialize(s),
            ExtReal::PosInf => s.serialize_str("+inf"),
        }
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for ExtReal<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ExtRealRepr::<T>::deserialize(d)? {
            ExtRealRepr::Number(x) => Ok(ExtReal::Finite(x)),
            ExtRealRepr::Text(t) if t == "+inf" || t == "inf" => Ok(ExtReal::PosInf),
            ExtRealRepr::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"+inf\", got {t:?}"))),
        }
    }
}

/// Extended-real function sampled on a tensor grid of dimension one or two.
/// Values are stored row-major (the last coordinate varies fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConvexFunction<T> {
    pub grid: Vec<Vec<T>>,
    pub values: Vec<ExtReal<T>>,
}

/// Checks a grid: one or two axes, each strictly increasing with at least
/// two nodes.
pub(crate) fn check_grid<T: Scalar>(grid: &[Vec<T>]) -> Result<()> {
    if grid.is_empty() || grid.len() > 2 {
        return Err(Error::InvalidArgument(format!("grids have one or two axes, got {}", grid.len())));
    }
    for (d, axis) in grid.iter().enumerate() {
        if axis.len() < 2 {
            return Err(Error::InvalidArgument(format!("axis {d} needs at least two nodes")));
        }
        if axis.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!("axis {d} is not strictly increasing")));
        }
    }
    Ok(())
}

impl<T: Scalar> GridConvexFunction<T> {
    pub fn new(grid: Vec<Vec<T>>, values: Vec<ExtReal<T>>) -> Result<Self> {
        check_grid(&grid)?;
        let expected = grid.iter().map(Vec::len).product();
        if values.len() != expected {
            return Err(Error::Dimension { expected, got: values.len() });
        }
        if !values.iter().any(|v| v.is_finite()) {
            return Err(Error::Improper);
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every grid node.
    pub fn from_fn(grid: Vec<Vec<T>>, f: impl Fn(&[T]) -> ExtReal<T>) -> Result<Self> {
        check_grid(&grid)?;
        let values = nodes(&grid).map(|x| f(&x)).collect();
        Self::new(grid, values)
    }

    /// Uniform axis `lo, lo + h, …` with `count` nodes.
    pub fn axis(lo: T, h: T, count: usize) -> Vec<T> {
        (0..count).map(|i| lo + h * T::of_count(i)).collect()
    }

    pub fn dims(&self) -> usize {
        self.grid.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.grid.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn node(&self, flat: usize) -> Vec<T> {
        unflatten(&self.shape(), flat).iter().zip(&self.grid).map(|(&i, axis)| axis[i]).collect()
    }

    pub fn value_at(&self, index: &[usize]) -> ExtReal<T> {
        self.values[flatten(&self.shape(), index)]
    }

    /// Largest spacing between neighbouring nodes on any axis.
    pub fn spacing(&self) -> T {
        grid_spacing(&self.grid)
    }

    /// Smallest value and a node attaining it.
    pub fn minimum(&self) -> (ExtReal<T>, Vec<T>) {
        let mut best = (ExtReal::PosInf, 0);
        for (i, &v) in self.values.iter().enumerate() {
            if v < best.0 {
                best = (v, i);
            }
        }
        (best.0, self.node(best.1))
    }
}

pub(crate) fn grid_spacing<T: Scalar>(grid: &[Vec<T>]) -> T {
    grid.iter().flat_map(|a| a.windows(2).map(|w| w[1] - w[0])).fold(T::zero(), T::max_of)
}

pub(crate) fn flatten(shape: &[usize], index: &[usize]) -> usize {
    index.iter().zip(shape).fold(0, |acc, (&i, &n)| acc * n + i)
}

pub(crate) fn unflatten(shape: &[usize], mut flat: usize) -> Vec<usize> {
    let mut index = vec![0; shape.len()];
    for d in (0..shape.len()).rev() {
        index[d] = flat % shape[d];
        flat /= shape[d];
    }
    index
}

/// All grid nodes in storage order.
pub(crate) fn nodes<T: Scalar>(grid: &[Vec<T>]) -> impl Iterator<Item = Vec<T>> + '_ {
    let shape: Vec<usize> = grid.iter().map(Vec::len).collect();
    let total: usize = shape.iter().product();
    (0..total).map(move |k| unflatten(&shape, k).iter().zip(grid).map(|(&i, axis)| axis[i]).collect())
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_real_arithmetic() {
        let one = ExtReal::Finite(1.0);
        assert_eq!(one.add(ExtReal::Finite(2.0)), ExtReal::Finite(3.0));
        assert_eq!(one.add(ExtReal::PosInf), ExtReal::PosInf);
        assert_eq!(ExtReal::PosInf.checked_sub(one), Ok(ExtReal::PosInf));
        assert_eq!(ExtReal::<f64>::PosInf.checked_sub(ExtReal::PosInf), Err(Error::InfMinusInf));
        assert_eq!(one.checked_sub(ExtReal::PosInf), Err(Error::InfMinusInf));
        assert!(one < ExtReal::PosInf);
        assert_eq!(one.min(ExtReal::PosInf), one);
    }

    #[test]
    fn ext_real_json() {
        let v: Vec<ExtReal<f64>> = serde_json::from_str(r#"[1.5, "+inf", -2]"#).unwrap();
        assert_eq!(v, vec![ExtReal::Finite(1.5), ExtReal::PosInf, ExtReal::Finite(-2.0)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1.5,"+inf",-2.0]"#);
        assert!(serde_json::from_str::<ExtReal<f64>>(r#""-inf""#).is_err());
    }

    #[test]
    fn grid_validation() {
        let f = GridConvexFunction::new(vec![vec![0.0, 1.0]], vec![ExtReal::PosInf, ExtReal::PosInf]);
        assert_eq!(f, Err(Error::Improper));
        assert!(GridConvexFunction::new(vec![vec![0.0, 0.0]], vec![ExtReal::Finite(0.0); 2]).is_err());
        assert!(GridConvexFunction::new(vec![vec![0.0]], vec![ExtReal::Finite(0.0)]).is_err());
        let g = GridConvexFunction::from_fn(vec![vec![0.0, 1.0], vec![0.0, 1.0, 2.0]], |x| ExtReal::Finite(x[0] + 10.0 * x[1])).unwrap();
        assert_eq!(g.node(4), vec![1.0, 1.0]);
        assert_eq!(g.value_at(&[1, 2]), ExtReal::Finite(21.0));
        assert_eq!(g.minimum(), (ExtReal::Finite(0.0), vec![0.0, 0.0]));
    }
}
