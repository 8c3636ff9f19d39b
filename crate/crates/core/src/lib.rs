//! Random walks on compact groups: exact Fourier and spectral analysis on finite
//! groups and the circle, and a seeded Monte Carlo harness for the strong law,
//! the law of the iterated logarithm and the central limit theorem of
//! `Σ f(S_k)`.
//!
//! Measure algebra is generic over [`Scalar`]; the aliases below fix the
//! common instantiations.

pub mod error;
pub mod function;
pub mod group;
pub mod io;
pub mod measure;
pub mod repr;
pub mod scalar;
pub mod sim;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
pub use function::{CircleFunction, TestFunction};
pub use group::{CircleGroup, Element, FiniteGroup, GroupSpec, Subgroup};
pub use measure::{CircleMeasure, Coupling, FiniteMeasure};
pub use num_rational::BigRational;
pub use repr::{CMatrix, CircleDual, DualSet, Irrep};
pub use scalar::Scalar;

/// Double-precision measure on a finite group.
pub type Measure = FiniteMeasure<f64>;
/// Single-precision measure on a finite group.
pub type Measure32 = FiniteMeasure<f32>;
/// Exact rational measure on a finite group.
pub type ExactMeasure = FiniteMeasure<BigRational>;
