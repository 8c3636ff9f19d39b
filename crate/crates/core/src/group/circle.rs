use rand::Rng;

/// The circle group ℝ/ℤ, with points represented in `[0, 1)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CircleGroup;

/// Reduces a real number mod 1 into `[0, 1)`.
#[inline]
pub fn reduce(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs.
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl CircleGroup {
    pub fn identity(&self) -> f64 {
        0.0
    }

    #[inline]
    pub fn compose(&self, x: f64, y: f64) -> f64 {
        reduce(x + y)
    }

    #[inline]
    pub fn inverse(&self, x: f64) -> f64 {
        reduce(-x)
    }

    pub fn haar_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random::<f64>()
    }
}
