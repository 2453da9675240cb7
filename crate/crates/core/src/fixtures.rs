//! Small systems with known answers.

use std::collections::BTreeMap;

use crate::scalar::Scalar;
use crate::symbolic::{LocallyConstantPotential, SubshiftSystem};

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// The three-point subshift on `{0, 1, a}` with `0 <-> 1`, `a -> 1` and the
/// potential `φ(x) = x_0` where the symbol `a` carries the value `a`.
///
/// Its points are `(10)^∞`, `(01)^∞` and `a(10)^∞`.
pub fn three_point_system<T: Scalar>(a: T) -> SubshiftSystem<T> {
    let mut values = BTreeMap::new();
    values.insert(vec![1], T::one());
    values.insert(vec![2], a);
    SubshiftSystem::new(
        vec!["0".into(), "1".into(), "a".into()],
        vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 1, 0]],
        LocallyConstantPotential { depth: 1, values, default: T::zero() },
    )
    .expect("three-point system is valid")
}

/// Full shift on `n` symbols with constant potential `c`.
pub fn full_shift<T: Scalar>(n: usize, c: T) -> SubshiftSystem<T> {
    SubshiftSystem::new(labels(n), vec![vec![1; n]; n], LocallyConstantPotential::constant(1, c))
        .expect("full shift is valid")
}

/// Full shift on `symbol_values.len()` symbols with `φ(x) = symbol_values[x_0]`.
pub fn full_shift_with_values<T: Scalar>(symbol_values: &[T]) -> SubshiftSystem<T> {
    let n = symbol_values.len();
    let values = symbol_values.iter().enumerate().map(|(i, &v)| (vec![i], v)).collect();
    SubshiftSystem::new(labels(n), vec![vec![1; n]; n], LocallyConstantPotential { depth: 1, values, default: T::zero() })
        .expect("full shift is valid")
}

/// Golden-mean shift (no `11`) with `φ(x) = symbol_values[x_0]`.
pub fn golden_mean<T: Scalar>(symbol_values: [T; 2]) -> SubshiftSystem<T> {
    let values = symbol_values.iter().enumerate().map(|(i, &v)| (vec![i], v)).collect();
    SubshiftSystem::new(
        labels(2),
        vec![vec![1, 1], vec![1, 0]],
        LocallyConstantPotential { depth: 1, values, default: T::zero() },
    )
    .expect("golden-mean shift is valid")
}

/// Golden-mean shift with a potential of depth two.
pub fn golden_mean_depth2<T: Scalar>(w00: T, w01: T, w10: T) -> SubshiftSystem<T> {
    let mut values = BTreeMap::new();
    values.insert(vec![0, 0], w00);
    values.insert(vec![0, 1], w01);
    values.insert(vec![1, 0], w10);
    SubshiftSystem::new(labels(2), vec![vec![1, 1], vec![1, 0]], LocallyConstantPotential { depth: 2, values, default: T::zero() })
        .expect("golden-mean shift is valid")
}
