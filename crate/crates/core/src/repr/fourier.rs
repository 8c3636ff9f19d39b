use num_complex::Complex64;

use super::{CMatrix, CircleDual, DualSet, Irrep};
use crate::error::{Error, Result};
use crate::function::{CircleFunction, TestFunction};
use crate::measure::{CircleMeasure, FiniteMeasure};
use crate::scalar::Scalar;

/// Relative tolerance for the finite-group Parseval identity.
pub const PARSEVAL_TOL: f64 = 1e-10;

/// A Fourier coefficient `f̂(π)` or `ν̂(π)`.
pub type FourierCoefficient = CMatrix;

fn check_len(pi: &Irrep, order: usize) -> Result<()> {
    if pi.matrices().len() != order {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// `f̂(π) = (1/n) Σ_x f(x) π(x)*`.
pub fn fourier_function(f: &TestFunction, pi: &Irrep) -> Result<FourierCoefficient> {
    let n = f.group().order();
    check_len(pi, n)?;
    let d = pi.dim();
    let mut out = CMatrix::zeros(d, d);
    for (x, &v) in f.values().iter().enumerate() {
        if v != 0.0 {
            out += pi.matrix(x).adjoint().scale(v);
        }
    }
    Ok(out.unscale(n as f64))
}

/// `ν̂(π) = Σ_x ν(x) π(x)*`.
pub fn fourier_measure<T: Scalar>(nu: &FiniteMeasure<T>, pi: &Irrep) -> Result<FourierCoefficient> {
    check_len(pi, nu.group().order())?;
    let d = pi.dim();
    let mut out = CMatrix::zeros(d, d);
    for (x, w) in nu.weights().iter().enumerate() {
        if !w.is_zero() {
            out += pi.matrix(x).adjoint().scale(w.as_f64());
        }
    }
    Ok(out)
}

impl DualSet {
    pub fn fourier_function(&self, f: &TestFunction, index: usize) -> Result<FourierCoefficient> {
        self.check_group(f.group())?;
        fourier_function(f, &self.irreps()[index])
    }

    pub fn fourier_measure<T: Scalar>(&self, nu: &FiniteMeasure<T>, index: usize) -> Result<FourierCoefficient> {
        self.check_group(nu.group())?;
        fourier_measure(nu, &self.irreps()[index])
    }
}

/// `Σ_π d_π tr(f̂(π) ĝ(π)*)`, checked against `∫ f g dμ`.
pub fn parseval(f: &TestFunction, g: &TestFunction, dual: &DualSet) -> Result<f64> {
    dual.check_group(f.group())?;
    dual.check_group(g.group())?;
    let mut spectral = 0.0;
    for pi in dual.irreps() {
        let a = fourier_function(f, pi)?;
        let b = fourier_function(g, pi)?;
        spectral += pi.dim() as f64 * (a * b.adjoint()).trace().re;
    }
    let n = f.values().len() as f64;
    let direct: f64 = f.values().iter().zip(g.values()).map(|(a, b)| a * b).sum::<f64>() / n;
    if (spectral - direct).abs() > PARSEVAL_TOL * direct.abs().max(1.0) {
        return Err(Error::Parseval { spectral, direct });
    }
    Ok(spectral)
}

/// `f̂(n)` on the circle.
pub fn circle_fourier_function(f: &CircleFunction, n: i64) -> Complex64 {
    f.fourier(n)
}

/// `ν̂(n)` on the circle.
pub fn circle_fourier_measure(nu: &CircleMeasure, n: i64) -> Complex64 {
    nu.fourier(n)
}

/// Windowed Parseval sum on the circle with a Cauchy–Schwarz tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowedSum {
    pub value: f64,
    pub tail_bound: f64,
}

pub fn circle_parseval(f: &CircleFunction, g: &CircleFunction, dual: CircleDual, tol: f64) -> Result<WindowedSum> {
    let value: f64 = dual.frequencies().map(|n| (f.fourier(n) * g.fourier(n).conj()).re).sum();
    let tail_bound = (f.fourier_tail_sq(dual.window) * g.fourier_tail_sq(dual.window)).sqrt();
    if tail_bound > tol {
        return Err(Error::Truncation { bound: tail_bound, tol });
    }
    Ok(WindowedSum { value, tail_bound })
}
