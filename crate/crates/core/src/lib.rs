//! Maximum ergodic averages on subshifts of finite type.
//!
//! The numerical code is generic over [`Scalar`] (or [`Real`] where logarithms
//! are needed); the aliases below fix the scalar type for everyday use.

pub mod averages;
pub mod convex;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod linalg;
pub mod markov;
pub mod pressure;
pub mod random;
pub mod scalar;
pub mod subaction;
pub mod symbolic;
pub mod variational;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

use num_rational::Rational64;

pub type System = symbolic::SubshiftSystem<f64>;
pub type ExactSystem = symbolic::SubshiftSystem<Rational64>;
pub type Graph = graph::WeightedDigraph<f64>;
pub type ExactGraph = graph::WeightedDigraph<Rational64>;
pub type Potential = pressure::PotentialVector<f64>;
pub type Pressure = pressure::PressureEvaluation<f64>;
pub type Measure = markov::MarkovMeasure<f64>;
pub type GridFunction = convex::GridConvexFunction<f64>;
pub type ExactGridFunction = convex::GridConvexFunction<Rational64>;
pub type Game = convex::BilinearGame<f64>;
pub type ExactGame = convex::BilinearGame<Rational64>;
