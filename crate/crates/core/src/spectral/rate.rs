use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{CircleMeasure, FiniteMeasure};
use crate::repr::{fourier_measure, CMatrix, CircleDual, DualSet};
use crate::scalar::Scalar;

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &CMatrix) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)].norm();
    }
    m.clone()
        .schur()
        .eigenvalues()
        .map(|ev| ev.iter().map(|z| z.norm()).fold(0.0, f64::max))
        .unwrap_or_else(|| m.singular_values().max())
}

/// `ρ(ν̂(π))` for every nontrivial irrep, labelled.
pub fn spectral_radii<T: Scalar>(nu: &FiniteMeasure<T>, dual: &DualSet) -> Result<Vec<(String, f64)>> {
    dual.check_group(nu.group())?;
    dual.nontrivial()
        .map(|pi| Ok((pi.label().to_string(), spectral_radius(&fourier_measure(nu, pi)?))))
        .collect()
}

/// `q = max_{π≠π₀} ρ(ν̂(π))`; the singular term vanishes on finite groups.
pub fn rate_q<T: Scalar>(nu: &FiniteMeasure<T>, dual: &DualSet) -> Result<f64> {
    Ok(spectral_radii(nu, dual)?.into_iter().map(|(_, r)| r).fold(0.0, f64::max))
}

/// The rate on the circle: spectral sup over a window, singular floor, and a tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleRate {
    /// `max(window sup, singular floor)`.
    pub q: f64,
    /// `max_{1≤n≤N} |ν̂(n)|`.
    pub window_sup: f64,
    /// `inf_k ‖(ν^{*k})_sing‖^{1/k}`, which is the total atom mass in this class.
    pub singular_floor: f64,
    /// Bound on `sup_{n>N} |ν̂(n)|`: atom mass plus the density's `O(1/n)` decay.
    pub tail_bound: f64,
}

impl CircleRate {
    /// A rigorous upper bound on `q`.
    pub fn upper(&self) -> f64 {
        self.q.max(self.tail_bound).min(1.0)
    }

    /// Whether the q-report is pinned by the atoms rather than the spectrum.
    pub fn singular_dominates(&self) -> bool {
        self.singular_floor >= self.window_sup
    }
}

/// Rate on the circle; fails when the window leaves more than `tol` of uncertainty.
pub fn circle_rate_q(nu: &CircleMeasure, dual: CircleDual, tol: f64) -> Result<CircleRate> {
    let window_sup = (1..=dual.window as i64).map(|n| nu.fourier(n).norm()).fold(0.0, f64::max);
    let singular_floor = nu.atom_mass();
    let tail_bound = singular_floor + nu.density().jump_variation() / (2.0 * PI * (dual.window as f64 + 1.0));
    let rate = CircleRate { q: window_sup.max(singular_floor).min(1.0), window_sup, singular_floor, tail_bound };
    if rate.upper() - rate.q > tol {
        return Err(Error::Truncation { bound: rate.upper() - rate.q, tol });
    }
    Ok(rate)
}
