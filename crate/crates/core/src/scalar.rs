//! Scalar abstractions.
//!
//! The combinatorial parts of the crate (recoding, Birkhoff sums, Karp, the
//! sub-action relaxation) only need an ordered field, so they are generic over
//! [`Scalar`] and run unchanged on `f32`, `f64` and exact rationals. Anything
//! that takes logarithms or exponentials (pressure, conjugates) needs [`Real`].

use std::fmt;

use num_rational::Rational64;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Ordered field element used by the symbolic and averaging code.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Threshold under which an improvement is ignored by fixed-point loops.
    /// Zero for exact types.
    fn relax_tolerance() -> Self;

    /// `n` as a scalar.
    fn of_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Lossy conversion from `f64`; used for tolerances and parsed input.
    fn of_f64(x: f64) -> Self {
        Self::from_f64(x).expect("f64 representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn relax_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn relax_tolerance() -> Self {
        1e-5
    }
}

impl Scalar for Rational64 {
    fn relax_tolerance() -> Self {
        Rational64::from_integer(0)
    }
}

/// Floating point scalar: everything [`Scalar`] offers plus `exp`/`ln`.
pub trait Real: Scalar + Float {}

impl<T: Scalar + Float> Real for T {}

/// `true` when `|a - b| <= tol`.
pub fn approx_eq<T: Scalar>(a: T, b: T, tol: T) -> bool {
    (a - b).abs() <= tol
}
