//! Weight types for measures on finite groups.
//!
//! Measure algebra (convolution, total variation, couplings) only needs a
//! signed field, so it is written once over [`Scalar`] and instantiated for
//! `f64`, `f32` and exact big rationals.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// A signed field usable as a measure weight.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `num / den` in this field.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer conversion") / Self::from_i64(den).expect("integer conversion")
    }

    /// Lossless where possible (floats), exact binary expansion for rationals.
    fn from_f64_value(x: f64) -> Self {
        Self::from_f64(x).expect("finite float")
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `|self - other| <= tol`, evaluated in `f64` after an exact subtraction.
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).abs().as_f64() <= tol
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl<T> Scalar for T where
    T: Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}
