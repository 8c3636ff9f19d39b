//! Real-valued test functions on a finite group or the circle.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{reduce, Element, FiniteGroup};
use crate::measure::{CircleMeasure, FiniteMeasure};
use crate::scalar::Scalar;

/// |mean| at or below this counts as mean zero.
pub const MEAN_ZERO_TOL: f64 = 1e-12;

/// A function `f: G → ℝ` on a finite group, with its Haar mean and
/// `L^p(μ)` norms for `p = 1..=4` cached.
#[derive(Debug, Clone)]
pub struct TestFunction {
    group: Arc<FiniteGroup>,
    values: Vec<f64>,
    mean: f64,
    norms: [f64; 4],
}

impl TestFunction {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<f64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidFunction(format!(
                "{} values for group of order {}",
                values.len(),
                group.order()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction("non-finite value".into()));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let norms = [1, 2, 3, 4].map(|p| lp_norm(&values, p as f64));
        Ok(TestFunction { group, values, mean, norms })
    }

    pub fn from_fn(group: Arc<FiniteGroup>, f: impl Fn(Element) -> f64) -> Self {
        let values = (0..group.order()).map(f).collect();
        Self::new(group, values).expect("values match group order")
    }

    /// `I_H − μ(H)` for a set `H` of elements.
    pub fn centered_indicator(group: Arc<FiniteGroup>, set: &[Element]) -> Result<Self> {
        for &x in set {
            group.check(x)?;
        }
        let mut values = vec![0.0; group.order()];
        for &x in set {
            values[x] = 1.0;
        }
        Self::new(group, values)?.centered()
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        Self::new(group, vec![0.0; n]).expect("zero function")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, x: Element) -> f64 {
        self.values[x]
    }

    /// `∫ f dμ`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn is_mean_zero(&self) -> bool {
        self.mean.abs() <= MEAN_ZERO_TOL
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `f − ∫ f dμ`.
    pub fn centered(&self) -> Result<Self> {
        let m = self.mean;
        Self::new(self.group.clone(), self.values.iter().map(|v| v - m).collect())
    }

    /// `‖f‖_p` for `p ∈ {1, 2, 3, 4}` (cached).
    pub fn norm(&self, p: u32) -> f64 {
        match p {
            1..=4 => self.norms[p as usize - 1],
            _ => lp_norm(&self.values, p as f64),
        }
    }

    /// `‖f‖_p` for real `p ≥ 1`.
    pub fn norm_p(&self, p: f64) -> f64 {
        lp_norm(&self.values, p)
    }

    /// Whether `f(g⁻¹xg) = f(x)` for all `x, g`.
    pub fn is_class_function(&self, tol: f64) -> bool {
        let g = &self.group;
        (0..g.order()).all(|x| (0..g.order()).all(|y| (self.values[g.conjugate(x, y)] - self.values[x]).abs() <= tol))
    }

    /// `L_p = sup_c E|f(c X₁)|^p`, exact as a maximum over the `n` shifts.
    pub fn shift_moment_sup<T: Scalar>(&self, nu: &FiniteMeasure<T>, p: f64) -> f64 {
        let g = &self.group;
        let support: Vec<(Element, f64)> = nu.support().into_iter().map(|x| (x, nu.weight(x).as_f64())).collect();
        (0..g.order())
            .map(|c| support.iter().map(|&(x, w)| w * self.values[g.mul(c, x)].abs().powf(p)).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

fn lp_norm(values: &[f64], p: f64) -> f64 {
    let n = values.len() as f64;
    (values.iter().map(|v| v.abs().powf(p)).sum::<f64>() / n).powf(1.0 / p)
}

/// Number of shift points used to estimate `sup_c` on the circle.
pub const CIRCLE_SHIFT_GRID: usize = 1 << 14;

/// A real function on ℝ/ℤ: piecewise constant, or a finite trigonometric series.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleFunction {
    /// Value `values[i]` on `[breaks[i], breaks[i+1])`, the last piece ending at 1.
    /// `breaks[0]` must be 0.
    Piecewise { breaks: Vec<f64>, values: Vec<f64> },
    /// `constant + Σ_k cos[k-1]·cos(2πkx) + sin[k-1]·sin(2πkx)`.
    Trig { constant: f64, cos: Vec<f64>, sin: Vec<f64> },
}

impl CircleFunction {
    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        validate_grid(&breaks, values.len()).map_err(Error::InvalidFunction)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction("non-finite value".into()));
        }
        Ok(CircleFunction::Piecewise { breaks, values })
    }

    pub fn trig(constant: f64, mut cos: Vec<f64>, mut sin: Vec<f64>) -> Self {
        let len = cos.len().max(sin.len());
        cos.resize(len, 0.0);
        sin.resize(len, 0.0);
        CircleFunction::Trig { constant, cos, sin }
    }

    pub fn value(&self, x: f64) -> f64 {
        let x = reduce(x);
        match self {
            CircleFunction::Piecewise { breaks, values } => values[piece_index(breaks, x)],
            CircleFunction::Trig { constant, cos, sin } => {
                let mut v = *constant;
                for (k, (a, b)) in cos.iter().zip(sin).enumerate() {
                    let t = 2.0 * PI * (k + 1) as f64 * x;
                    v += a * t.cos() + b * t.sin();
                }
                v
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            CircleFunction::Piecewise { breaks, values } => {
                piece_lengths(breaks).zip(values).map(|(l, v)| l * v).sum()
            }
            CircleFunction::Trig { constant, .. } => *constant,
        }
    }

    pub fn is_mean_zero(&self) -> bool {
        self.mean().abs() <= MEAN_ZERO_TOL
    }

    pub fn centered(&self) -> Self {
        let m = self.mean();
        match self {
            CircleFunction::Piecewise { breaks, values } => CircleFunction::Piecewise {
                breaks: breaks.clone(),
                values: values.iter().map(|v| v - m).collect(),
            },
            CircleFunction::Trig { cos, sin, .. } => {
                CircleFunction::Trig { constant: 0.0, cos: cos.clone(), sin: sin.clone() }
            }
        }
    }

    /// `‖f‖_p`; exact for piecewise functions, midpoint quadrature on
    /// [`CIRCLE_SHIFT_GRID`] points for trigonometric series (exact for `p = 2`).
    pub fn norm(&self, p: f64) -> f64 {
        match self {
            CircleFunction::Piecewise { breaks, values } => piece_lengths(breaks)
                .zip(values)
                .map(|(l, v)| l * v.abs().powf(p))
                .sum::<f64>()
                .powf(1.0 / p),
            CircleFunction::Trig { constant, cos, sin } if p == 2.0 => {
                let sq: f64 = cos.iter().chain(sin).map(|a| a * a).sum::<f64>() / 2.0;
                (constant * constant + sq).sqrt()
            }
            CircleFunction::Trig { .. } => {
                let m = CIRCLE_SHIFT_GRID;
                ((0..m).map(|i| self.value((i as f64 + 0.5) / m as f64).abs().powf(p)).sum::<f64>() / m as f64)
                    .powf(1.0 / p)
            }
        }
    }

    /// `f̂(n) = ∫ f(x) e^{−2πinx} dx`.
    pub fn fourier(&self, n: i64) -> Complex64 {
        match self {
            CircleFunction::Piecewise { breaks, values } => piecewise_fourier(breaks, values, n),
            CircleFunction::Trig { constant, cos, sin } => {
                if n == 0 {
                    return Complex64::new(*constant, 0.0);
                }
                let k = n.unsigned_abs() as usize;
                if k > cos.len() {
                    return Complex64::new(0.0, 0.0);
                }
                let c = Complex64::new(cos[k - 1] / 2.0, -sin[k - 1] / 2.0);
                if n > 0 {
                    c
                } else {
                    c.conj()
                }
            }
        }
    }

    /// Upper bound on `Σ_{|n|>N} |f̂(n)|²`.
    pub fn fourier_tail_sq(&self, n_max: usize) -> f64 {
        match self {
            CircleFunction::Piecewise { breaks, values } => {
                // |f̂(n)| ≤ V/(2π|n|) with V the circular jump variation.
                let v = circular_variation(values);
                let _ = breaks;
                2.0 * (v / (2.0 * PI)).powi(2) / n_max.max(1) as f64
            }
            CircleFunction::Trig { cos, sin, .. } => cos
                .iter()
                .zip(sin)
                .skip(n_max)
                .map(|(a, b)| (a * a + b * b) / 2.0)
                .sum(),
        }
    }

    /// `∫ f g dμ`, exact for piecewise pairs and trigonometric pairs.
    pub fn inner(&self, other: &CircleFunction) -> f64 {
        use CircleFunction::*;
        match (self, other) {
            (Piecewise { breaks: b1, values: v1 }, Piecewise { breaks: b2, values: v2 }) => {
                let mut grid: Vec<f64> = b1.iter().chain(b2).copied().collect();
                grid.sort_by(f64::total_cmp);
                grid.dedup_by(|a, b| (*a - *b).abs() < GRID_EPS);
                let mut total = 0.0;
                for (i, &a) in grid.iter().enumerate() {
                    let b = grid.get(i + 1).copied().unwrap_or(1.0);
                    let mid = 0.5 * (a + b);
                    total += (b - a) * v1[piece_index(b1, mid)] * v2[piece_index(b2, mid)];
                }
                total
            }
            (Trig { constant: c1, cos: a1, sin: s1 }, Trig { constant: c2, cos: a2, sin: s2 }) => {
                c1 * c2
                    + a1.iter().zip(a2).map(|(x, y)| x * y / 2.0).sum::<f64>()
                    + s1.iter().zip(s2).map(|(x, y)| x * y / 2.0).sum::<f64>()
            }
            (Trig { .. }, Piecewise { .. }) => other.inner(self),
            (Piecewise { breaks, values }, Trig { constant, cos, sin }) => {
                let mut total = 0.0;
                for (i, &a) in breaks.iter().enumerate() {
                    let b = breaks.get(i + 1).copied().unwrap_or(1.0);
                    let mut piece = constant * (b - a);
                    for (k, (ca, sa)) in cos.iter().zip(sin).enumerate() {
                        let w = 2.0 * PI * (k + 1) as f64;
                        piece += ca * ((w * b).sin() - (w * a).sin()) / w;
                        piece += sa * ((w * a).cos() - (w * b).cos()) / w;
                    }
                    total += values[i] * piece;
                }
                total
            }
        }
    }

    /// Estimate of `L_p = sup_c E|f(c + X₁)|^p` on a grid of shifts.
    ///
    /// Atoms are exact; density pieces use 64-point midpoint quadrature.
    pub fn shift_moment_sup(&self, nu: &CircleMeasure, p: f64) -> f64 {
        const SUB: usize = 64;
        let m = CIRCLE_SHIFT_GRID;
        let density = nu.density();
        (0..m)
            .map(|i| {
                let c = i as f64 / m as f64;
                let atoms: f64 = nu.atoms().iter().map(|a| a.mass * self.value(c + a.location).abs().powf(p)).sum();
                let dens: f64 = density
                    .pieces()
                    .map(|(a, b, v)| {
                        let h = (b - a) / SUB as f64;
                        v * h * (0..SUB).map(|j| self.value(c + a + (j as f64 + 0.5) * h).abs().powf(p)).sum::<f64>()
                    })
                    .sum();
                atoms + dens
            })
            .fold(0.0, f64::max)
    }
}

/// Breakpoints closer than this are merged.
pub(crate) const GRID_EPS: f64 = 1e-12;

pub(crate) fn validate_grid(breaks: &[f64], pieces: usize) -> std::result::Result<(), String> {
    if breaks.is_empty() {
        return Err("grid needs at least one breakpoint".into());
    }
    if breaks.len() != pieces {
        return Err(format!("{} breakpoints but {} piece values", breaks.len(), pieces));
    }
    if breaks[0] != 0.0 {
        return Err("first breakpoint must be 0".into());
    }
    if breaks.windows(2).any(|w| w[1] <= w[0]) || breaks.iter().any(|&b| !(0.0..1.0).contains(&b)) {
        return Err("breakpoints must be strictly increasing in [0, 1)".into());
    }
    Ok(())
}

pub(crate) fn piece_index(breaks: &[f64], x: f64) -> usize {
    breaks.partition_point(|&b| b <= x).saturating_sub(1)
}

pub(crate) fn piece_lengths(breaks: &[f64]) -> impl Iterator<Item = f64> + '_ {
    breaks.iter().enumerate().map(move |(i, &a)| breaks.get(i + 1).copied().unwrap_or(1.0) - a)
}

pub(crate) fn circular_variation(values: &[f64]) -> f64 {
    let n = values.len();
    (0..n).map(|i| (values[(i + 1) % n] - values[i]).abs()).sum()
}

/// `∫ Σ v_i 1_{[b_i, b_{i+1})}(x) e^{−2πinx} dx`.
pub(crate) fn piecewise_fourier(breaks: &[f64], values: &[f64], n: i64) -> Complex64 {
    if n == 0 {
        return Complex64::new(piece_lengths(breaks).zip(values).map(|(l, v)| l * v).sum(), 0.0);
    }
    let w = -2.0 * PI * n as f64;
    let e = |x: f64| Complex64::from_polar(1.0, w * x);
    let denom = Complex64::new(0.0, w);
    breaks
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let b = breaks.get(i + 1).copied().unwrap_or(1.0);
            values[i] * (e(b) - e(a)) / denom
        })
        .sum()
}
