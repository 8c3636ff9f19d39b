use nalgebra::Complex;
use serde::Serialize;

use super::delta::{delta_tail_bound, weighted_delta_tail_bound, DeviationIter, DEFAULT_MAX_TERMS};
use super::rate::spectral_radius;
use crate::error::{Error, Result};
use crate::function::{CircleFunction, TestFunction};
use crate::measure::{CircleMeasure, FiniteMeasure};
use crate::repr::{fourier_function, fourier_measure, CMatrix, CircleDual, DualSet};
use crate::scalar::Scalar;

/// Smallest singular value of `I − ν̂(π)` treated as invertible.
pub const SINGULAR_TOL: f64 = 1e-10;
/// Fourier terms of `C(f, ν)` below `−NONNEG_TOL` indicate a bug.
pub const NONNEG_TOL: f64 = 1e-10;

fn require_mean_zero(f: &TestFunction) -> Result<()> {
    if !f.is_mean_zero() {
        return Err(Error::InvalidFunction(format!("f must have mean zero (mean {:e})", f.mean())));
    }
    Ok(())
}

/// `g(x) = ∫ f(u) f(ux) dμ(u)`, so that `A_k = Σ_x g(x) ν^{*k}(x)`.
pub fn self_correlation(f: &TestFunction) -> Vec<f64> {
    let g = f.group();
    let n = g.order();
    let v = f.values();
    (0..n).map(|x| (0..n).map(|u| v[u] * v[g.mul(u, x)]).sum::<f64>() / n as f64).collect()
}

fn pair<T: Scalar>(corr: &[f64], d: &FiniteMeasure<T>) -> f64 {
    d.weights().iter().zip(corr).map(|(w, c)| w.as_f64() * c).sum()
}

/// `A_k = ∫∫ f(u) f(ux) dμ(u) dν^{*k}(x)`.
pub fn autocovariance<T: Scalar>(f: &TestFunction, nu: &FiniteMeasure<T>, k: u64) -> Result<f64> {
    require_mean_zero(f)?;
    if k == 0 {
        return Ok(f.norm(2).powi(2));
    }
    let corr = self_correlation(f);
    let nk = nu.power(k)?.minus_haar();
    Ok(pair(&corr, &nk))
}

/// `(A_k, Δ_k)` for `k = 1..=k_max`.
pub fn autocovariances<T: Scalar>(f: &TestFunction, nu: &FiniteMeasure<T>, k_max: usize) -> Result<Vec<(f64, f64)>> {
    require_mean_zero(f)?;
    let corr = self_correlation(f);
    Ok(DeviationIter::new(nu).take(k_max).map(|(_, d)| (pair(&corr, &d), d.tv_norm().as_f64())).collect())
}

/// A truncated series value with a bound on what was left out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// `C(f, ν) = ‖f‖₂² + 2ΣA_k`, summed until `Δ_K ≤ tol`.
pub fn c_series<T: Scalar>(f: &TestFunction, nu: &FiniteMeasure<T>, tol: f64) -> Result<SeriesValue> {
    c_series_with(f, nu, tol, DEFAULT_MAX_TERMS)
}

pub fn c_series_with<T: Scalar>(f: &TestFunction, nu: &FiniteMeasure<T>, tol: f64, max_terms: usize) -> Result<SeriesValue> {
    require_mean_zero(f)?;
    let corr = self_correlation(f);
    let norm2 = f.norm(2).powi(2);
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut terms = 0;
    for (k, d) in DeviationIter::new(nu).take(max_terms) {
        sum += pair(&corr, &d);
        last = d.tv_norm().as_f64();
        terms = k as usize;
        if last <= tol {
            break;
        }
    }
    if last >= 1.0 {
        return Err(Error::Divergent(format!("Δ_k ≥ 1 through k = {terms}, so q = 1")));
    }
    Ok(SeriesValue { value: norm2 + 2.0 * sum, tail_bound: 2.0 * norm2 * delta_tail_bound(terms, last), terms })
}

/// `B_ν(π) = I + (I − ν̂)^{−1}ν̂ + (I − ν̂*)^{−1}ν̂*`.
pub fn b_nu(nu_hat: &CMatrix) -> Result<CMatrix> {
    let d = nu_hat.nrows();
    let eye = CMatrix::identity(d, d);
    let a = &eye - nu_hat;
    if a.singular_values().min() < SINGULAR_TOL {
        return Err(Error::Divergent(format!("I − ν̂(π) is singular (spectral radius {})", spectral_radius(nu_hat))));
    }
    let inv = a.try_inverse().ok_or_else(|| Error::Divergent("I − ν̂(π) is not invertible".into()))?;
    let forward = &inv * nu_hat;
    Ok(&eye + &forward + forward.adjoint())
}

/// One irrep's contribution `d_π tr(f̂ f̂* B_ν(π))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierTerm {
    pub label: String,
    pub dim: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierValue {
    pub value: f64,
    pub terms: Vec<FourierTerm>,
}

impl FourierValue {
    pub fn min_term(&self) -> f64 {
        self.terms.iter().map(|t| t.value).fold(f64::INFINITY, f64::min)
    }
}

/// `C(f, ν) = Σ_{π≠π₀} d_π tr(f̂(π) f̂(π)* B_ν(π))`.
///
/// With `f̂(π) = ∫ f π* dμ`, the right translate `u ↦ f(ux)` has coefficient
/// `π(x) f̂(π)`, which puts `f̂ f̂*` (not `f̂* f̂`) next to `ν̂^k`.
pub fn c_fourier<T: Scalar>(f: &TestFunction, nu: &FiniteMeasure<T>, dual: &DualSet) -> Result<FourierValue> {
    require_mean_zero(f)?;
    dual.check_group(f.group())?;
    dual.check_group(nu.group())?;
    let mut terms = Vec::new();
    for pi in dual.nontrivial() {
        let fh = fourier_function(f, pi)?;
        let gram = &fh * fh.adjoint();
        let value = if gram.norm() == 0.0 {
            0.0
        } else {
            pi.dim() as f64 * (gram * b_nu(&fourier_measure(nu, pi)?)?).trace().re
        };
        terms.push(FourierTerm { label: pi.label().to_string(), dim: pi.dim(), value });
    }
    Ok(FourierValue { value: terms.iter().map(|t| t.value).sum(), terms })
}

/// `C(f, ν)` on the circle: `Σ_{n≠0} |f̂(n)|² (1 − |ν̂(n)|²)/|1 − ν̂(n)|²` over the window.
pub fn circle_c_fourier(f: &CircleFunction, nu: &CircleMeasure, dual: CircleDual, q_upper: f64) -> Result<SeriesValue> {
    if !f.is_mean_zero() {
        return Err(Error::InvalidFunction("f must have mean zero".into()));
    }
    if q_upper >= 1.0 {
        return Err(Error::Divergent("q = 1 on the circle".into()));
    }
    let mut value = 0.0;
    for n in 1..=dual.window as i64 {
        let fh = f.fourier(n).norm_sqr();
        if fh == 0.0 {
            continue;
        }
        let z = nu.fourier(n);
        let denom = (Complex::new(1.0, 0.0) - z).norm_sqr();
        if denom < SINGULAR_TOL {
            return Err(Error::Divergent(format!("1 − ν̂({n}) vanishes")));
        }
        value += 2.0 * fh * (1.0 - z.norm_sqr()) / denom;
    }
    let tail_bound = f.fourier_tail_sq(dual.window) * (1.0 + q_upper) / (1.0 - q_upper);
    Ok(SeriesValue { value, tail_bound, terms: dual.window })
}

/// Which hypothesis makes the class/central bracket apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketHypothesis {
    ClassFunction,
    CentralMeasure,
    NormalMeasure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassBounds {
    pub lower: f64,
    pub upper: f64,
    pub hypothesis: BracketHypothesis,
}

impl ClassBounds {
    pub fn contains(&self, c: f64, tol: f64) -> bool {
        c >= self.lower - tol && c <= self.upper + tol
    }
}

/// `[(1−q)/(1+q)‖f‖₂², (1+q)/(1−q)‖f‖₂²]` when `f` is a class function or `ν`
/// is central or normal; `None` otherwise.
pub fn class_central_bounds<T: Scalar>(f: &TestFunction, nu: &FiniteMeasure<T>, q: f64) -> Result<Option<ClassBounds>> {
    const TOL: f64 = 1e-12;
    let hypothesis = if f.is_class_function(TOL) {
        BracketHypothesis::ClassFunction
    } else if nu.is_central(TOL) {
        BracketHypothesis::CentralMeasure
    } else if nu.is_normal(TOL)? {
        BracketHypothesis::NormalMeasure
    } else {
        return Ok(None);
    };
    let norm2 = f.norm(2).powi(2);
    let (lower, upper) = if q >= 1.0 {
        (0.0, f64::INFINITY)
    } else {
        ((1.0 - q) / (1.0 + q) * norm2, (1.0 + q) / (1.0 - q) * norm2)
    };
    Ok(Some(ClassBounds { lower, upper, hypothesis }))
}

/// `E(Σ_{k=1}^N f(US_k))² = N‖f‖₂² + 2Σ_{d<N}(N − d)A_d`.
pub fn variance_exact<T: Scalar>(f: &TestFunction, nu: &FiniteMeasure<T>, n: usize) -> Result<f64> {
    Ok(*variance_exact_series(f, nu, n)?.last().unwrap_or(&0.0))
}

/// `variance_exact(f, ν, N)` for every `N = 1..=n_max` in one pass.
pub fn variance_exact_series<T: Scalar>(f: &TestFunction, nu: &FiniteMeasure<T>, n_max: usize) -> Result<Vec<f64>> {
    require_mean_zero(f)?;
    let norm2 = f.norm(2).powi(2);
    let a: Vec<f64> = autocovariances(f, nu, n_max.saturating_sub(1))?.into_iter().map(|(a, _)| a).collect();
    // V(N+1) − V(N) = ‖f‖² + 2Σ_{d≤N} A_d.
    let mut out = Vec::with_capacity(n_max);
    let mut v = 0.0;
    let mut prefix = 0.0;
    for n in 0..n_max {
        if n > 0 {
            prefix += a[n - 1];
        }
        v += norm2 + 2.0 * prefix;
        out.push(v);
    }
    Ok(out)
}

/// `2‖f‖₂² Σ_{d≥1} d·Δ_d`, which bounds `|variance_exact − C·N|` for every `N`.
pub fn variance_remainder_bound<T: Scalar>(f: &TestFunction, nu: &FiniteMeasure<T>, tol: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut terms = 0;
    for (k, d) in DeviationIter::new(nu).take(DEFAULT_MAX_TERMS) {
        last = d.tv_norm().as_f64();
        sum += k as f64 * last;
        terms = k as usize;
        if last <= tol {
            break;
        }
    }
    if last >= 1.0 {
        return Err(Error::Divergent("Σ kΔ_k diverges".into()));
    }
    Ok(2.0 * f.norm(2).powi(2) * (sum + weighted_delta_tail_bound(terms, last)))
}
