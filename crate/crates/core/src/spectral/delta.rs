use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{CircleMeasure, FiniteMeasure};
use crate::scalar::Scalar;

/// Default cap on the number of terms summed in series over `k`.
pub const DEFAULT_MAX_TERMS: usize = 200_000;

/// Iterates `D_k = ν^{*k} − μ` by `D_{k+1} = D_k * ν`, re-centering every step so
/// that tiny `D_k` keep full relative accuracy.
#[derive(Debug, Clone)]
pub struct DeviationIter<T: Scalar> {
    nu: FiniteMeasure<T>,
    current: FiniteMeasure<T>,
    k: u64,
}

impl<T: Scalar> DeviationIter<T> {
    pub fn new(nu: &FiniteMeasure<T>) -> Self {
        DeviationIter { nu: nu.clone(), current: nu.minus_haar(), k: 0 }
    }
}

impl<T: Scalar> Iterator for DeviationIter<T> {
    /// `(k, D_k)`.
    type Item = (u64, FiniteMeasure<T>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.k > 0 {
            self.current = self.current.convolve(&self.nu).expect("same group").centered();
        }
        self.k += 1;
        Some((self.k, self.current.clone()))
    }
}

/// `Δ_k = ‖ν^{*k} − μ‖_TV`, computed as the total variation of `(ν − μ)^{*k}`.
pub fn delta_k<T: Scalar>(nu: &FiniteMeasure<T>, k: u64) -> Result<T> {
    if k == 0 {
        return Err(Error::Domain("delta_k needs k >= 1".into()));
    }
    let d = nu.minus_haar();
    let mut result: Option<FiniteMeasure<T>> = None;
    let mut base = d;
    let mut k = k;
    loop {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.convolve(&base)?.centered(),
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = base.convolve(&base)?.centered();
    }
    Ok(result.expect("k >= 1").tv_norm())
}

/// `Δ_1, …, Δ_K`.
pub fn delta_sequence<T: Scalar>(nu: &FiniteMeasure<T>, k_max: usize) -> Vec<T> {
    DeviationIter::new(nu).take(k_max).map(|(_, d)| d.tv_norm()).collect()
}

/// `Σ_{k>K} Δ_k ≤ K·Δ_K/(1 − Δ_K)`, from `Δ_{j+k} ≤ Δ_j Δ_k` and monotonicity.
pub fn delta_tail_bound(k: usize, delta_k: f64) -> f64 {
    if delta_k >= 1.0 {
        f64::INFINITY
    } else {
        k as f64 * delta_k / (1.0 - delta_k)
    }
}

/// `Σ_{k>K} k·Δ_k ≤ K²((1 − Δ_K)^{−2} − 1)`.
pub fn weighted_delta_tail_bound(k: usize, delta_k: f64) -> f64 {
    if delta_k >= 1.0 {
        f64::INFINITY
    } else {
        let k = k as f64;
        k * k * (1.0 / (1.0 - delta_k).powi(2) - 1.0)
    }
}

/// `Δ = 1 + 2ΣΔ_k` with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaTotal {
    /// `1 + 2Σ_{k≤K} Δ_k`.
    pub value: f64,
    /// Upper bound on `2Σ_{k>K} Δ_k`.
    pub tail_bound: f64,
    pub table: Vec<f64>,
}

impl DeltaTotal {
    pub fn terms(&self) -> usize {
        self.table.len()
    }

    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

/// Sums `Δ_k` until `Δ_K ≤ tol`.
pub fn delta_total<T: Scalar>(nu: &FiniteMeasure<T>, tol: f64) -> Result<DeltaTotal> {
    delta_total_with(nu, tol, DEFAULT_MAX_TERMS)
}

pub fn delta_total_with<T: Scalar>(nu: &FiniteMeasure<T>, tol: f64, max_terms: usize) -> Result<DeltaTotal> {
    let mut table = Vec::new();
    let mut sum = 0.0;
    for (_, d) in DeviationIter::new(nu).take(max_terms) {
        let dk = d.tv_norm().as_f64();
        table.push(dk);
        sum += dk;
        if dk <= tol {
            break;
        }
    }
    let last = *table.last().expect("max_terms >= 1");
    if last >= 1.0 {
        return Err(Error::Divergent(format!("Δ_k ≥ 1 through k = {}, so q = 1", table.len())));
    }
    Ok(DeltaTotal { value: 1.0 + 2.0 * sum, tail_bound: 2.0 * delta_tail_bound(table.len(), last), table })
}

/// `Δ_k` on the circle with the accumulated projection error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleDelta {
    pub value: f64,
    pub projection_error: f64,
}

pub fn circle_delta_k(nu: &CircleMeasure, k: u64) -> Result<CircleDelta> {
    let p = nu.power(k)?;
    Ok(CircleDelta { value: p.tv_distance(&CircleMeasure::haar()), projection_error: p.projection_error() })
}
