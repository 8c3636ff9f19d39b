use serde::Serialize;

use crate::error::{Error, Result};

/// An interval `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Interval { lower: x, upper: x }
    }

    pub fn around(x: f64, radius: f64) -> Self {
        Interval { lower: x - radius, upper: x + radius }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// `K = Δ (‖f‖_{2+δ}/√C)^{(2+δ)/(1+δ)}`, monotone in `Δ` and `C`, so the interval
/// inputs map to an interval output.
pub fn berry_esseen_k(norm_2_plus_delta: f64, c: Interval, big_delta: Interval, delta: f64) -> Result<Interval> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("δ = {delta} outside (0, 1]")));
    }
    if c.upper <= 0.0 {
        return Err(Error::Degenerate("C(f, ν) = 0, the CLT limit is degenerate".into()));
    }
    let e = (2.0 + delta) / (1.0 + delta);
    let k = |c: f64, d: f64| d * (norm_2_plus_delta / c.sqrt()).powf(e);
    let lower = k(c.upper, big_delta.lower);
    let upper = if c.lower > 0.0 { k(c.lower, big_delta.upper) } else { f64::INFINITY };
    Ok(Interval { lower, upper })
}

/// `K = Δ‖f‖₂^{3/2}/C^{3/4}`: the `δ = 1` constant with `‖f‖₃` replaced by `‖f‖₂`,
/// valid for `f ∈ L⁴`.
pub fn berry_esseen_k_l2(norm2: f64, c: Interval, big_delta: Interval) -> Result<Interval> {
    if c.upper <= 0.0 {
        return Err(Error::Degenerate("C(f, ν) = 0, the CLT limit is degenerate".into()));
    }
    let k = |c: f64, d: f64| d * norm2.powf(1.5) / c.powf(0.75);
    let upper = if c.lower > 0.0 { k(c.lower, big_delta.upper) } else { f64::INFINITY };
    Ok(Interval { lower: k(c.upper, big_delta.lower), upper })
}

/// `log^{δ/(1+δ)}N / N^{δ/(2+2δ)}`.
pub fn berry_esseen_rate(n: f64, delta: f64) -> f64 {
    n.ln().powf(delta / (1.0 + delta)) / n.powf(delta / (2.0 + 2.0 * delta))
}

/// `log_m N`: the `m`-fold iterated natural logarithm, `None` once it leaves the domain.
pub fn iterated_log(m: u32, n: f64) -> Option<f64> {
    let mut x = n;
    for _ in 0..m {
        if x <= 0.0 {
            return None;
        }
        x = x.ln();
    }
    Some(x)
}

/// `φ_{m,ε}(N) = N (∏_{i<m} log_i N) (log_m N)^{1+ε}` with natural logarithms.
pub fn phi(m: u32, eps: f64, n: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("φ needs m ≥ 1".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("φ needs ε > 0, got {eps}")));
    }
    let mut value = n;
    for i in 1..m {
        value *= iterated_log(i, n).filter(|&l| l > 0.0).ok_or_else(|| domain(m, n))?;
    }
    let last = iterated_log(m, n).filter(|&l| l > 0.0).ok_or_else(|| domain(m, n))?;
    Ok(value * last.powf(1.0 + eps))
}

fn domain(m: u32, n: f64) -> Error {
    Error::Domain(format!("log_{m} N ≤ 0 at N = {n}"))
}
