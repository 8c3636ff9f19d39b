use serde::Serialize;

use super::constants::{berry_esseen_k, berry_esseen_k_l2, Interval};
use super::delta::{circle_delta_k, delta_sequence, delta_total_with, DeltaTotal, DEFAULT_MAX_TERMS};
use super::rate::{circle_rate_q, spectral_radii, CircleRate};
use super::variance::{c_fourier, c_series_with, circle_c_fourier, class_central_bounds, ClassBounds, FourierValue, SeriesValue};
use crate::error::{Error, Result};
use crate::function::{CircleFunction, TestFunction};
use crate::measure::{has_abs_component, is_adapted, is_strictly_aperiodic, CircleMeasure, FiniteMeasure};
use crate::repr::{CircleDual, DualSet};
use crate::scalar::Scalar;

/// `q` at or above `1 − Q_ONE_TOL` is reported as divergent.
pub const Q_ONE_TOL: f64 = 1e-9;
/// `|C| ≤ C_ZERO_TOL` is treated as a degenerate variance constant.
pub const C_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisOptions {
    /// Stop summing once `Δ_K ≤ tol`.
    pub tol: f64,
    /// Berry–Esseen exponent `δ ∈ (0, 1]`.
    pub delta: f64,
    /// Rows in the `Δ_k` table.
    pub table_len: usize,
    pub max_terms: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { tol: 1e-12, delta: 1.0, table_len: 64, max_terms: DEFAULT_MAX_TERMS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flags {
    pub adapted: bool,
    pub strictly_aperiodic: bool,
    pub abs_component: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusEntry {
    pub irrep: String,
    pub radius: f64,
}

/// Everything the spectral analysis computes for one `(G, ν, f)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub group: String,
    pub order: usize,
    pub flags: Flags,
    pub q: f64,
    pub spectral_radii: Vec<RadiusEntry>,
    pub delta_table: Vec<f64>,
    /// `None` when `q = 1`.
    pub delta_sum: Option<DeltaTotal>,
    pub divergent: bool,
    pub f_mean: f64,
    pub f_norms: [f64; 4],
    pub c_series: Option<SeriesValue>,
    pub c_fourier: Option<FourierValue>,
    pub class_bounds: Option<ClassBounds>,
    pub k_clt: Option<Interval>,
    pub k_clt_l2: Option<Interval>,
    pub degenerate: bool,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    /// Best available `C(f, ν)`: the Fourier route, else the series.
    pub fn c(&self) -> Option<f64> {
        self.c_fourier.as_ref().map(|c| c.value).or(self.c_series.as_ref().map(|c| c.value))
    }

    /// `(k, Δ_k, Δ_k^{1/k})` rows.
    pub fn rate_rows(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.delta_table.iter().enumerate().map(|(i, &d)| (i + 1, d, d.powf(1.0 / (i + 1) as f64)))
    }
}

pub fn analyze<T: Scalar>(
    f: &TestFunction,
    nu: &FiniteMeasure<T>,
    dual: &DualSet,
    opts: &AnalysisOptions,
) -> Result<AnalysisReport> {
    dual.check_group(nu.group())?;
    dual.check_group(f.group())?;
    if !f.is_mean_zero() {
        return Err(Error::InvalidFunction(format!("f must have mean zero (mean {:e})", f.mean())));
    }
    let g = nu.group();
    let flags = Flags {
        adapted: is_adapted(nu)?,
        strictly_aperiodic: is_strictly_aperiodic(nu)?,
        abs_component: has_abs_component(nu),
    };
    let radii = spectral_radii(nu, dual)?;
    let q = radii.iter().map(|r| r.1).fold(0.0, f64::max);
    let delta_table: Vec<f64> = delta_sequence(nu, opts.table_len).into_iter().map(|d| d.as_f64()).collect();
    let mut notes = Vec::new();
    let divergent = q >= 1.0 - Q_ONE_TOL;
    let f_norms = [f.norm(1), f.norm(2), f.norm(3), f.norm(4)];

    let (delta_sum, c_series, c_fourier, class_bounds) = if divergent {
        notes.push("q = 1: Δ and the autocovariance series diverge".into());
        // A periodic walk keeps I − ν̂(π) invertible; the quadratic form is then
        // the Cesàro limit of Var/N.
        let fourier = c_fourier(f, nu, dual).ok();
        if fourier.is_some() {
            notes.push("C(f, ν) from the Fourier route only (1 is not an eigenvalue of any ν̂(π))".into());
        }
        (None, None, fourier, None)
    } else {
        let total = delta_total_with(nu, opts.tol, opts.max_terms)?;
        let series = c_series_with(f, nu, opts.tol, opts.max_terms)?;
        let fourier = c_fourier(f, nu, dual)?;
        let bounds = class_central_bounds(f, nu, q)?;
        (Some(total), Some(series), Some(fourier), bounds)
    };

    let mut degenerate = false;
    let (mut k_clt, mut k_clt_l2) = (None, None);
    if divergent && c_fourier.as_ref().is_some_and(|c| c.value.abs() <= C_ZERO_TOL) {
        degenerate = true;
        notes.push("C(f, ν) = 0: Σf(S_k)/√N → 0 in L²".into());
    }
    if let (Some(total), Some(series), Some(fourier)) = (&delta_sum, &c_series, &c_fourier) {
        let big_delta = Interval { lower: total.value, upper: total.upper() };
        let c = Interval { lower: fourier.value.min(series.value - series.tail_bound), upper: fourier.value.max(series.value + series.tail_bound) };
        if fourier.value.abs() <= C_ZERO_TOL {
            degenerate = true;
            notes.push("C(f, ν) = 0: Σf(S_k)/√N → 0 in L²".into());
        } else {
            k_clt = Some(berry_esseen_k(f.norm_p(2.0 + opts.delta), c, big_delta, opts.delta)?);
            k_clt_l2 = Some(berry_esseen_k_l2(f_norms[1], c, big_delta)?);
        }
        if (series.value - fourier.value).abs() > series.tail_bound + 1e-9 {
            notes.push(format!("series and Fourier routes disagree: {} vs {}", series.value, fourier.value));
        }
    }

    Ok(AnalysisReport {
        group: g.name().to_string(),
        order: g.order(),
        flags,
        q,
        spectral_radii: radii.into_iter().map(|(irrep, radius)| RadiusEntry { irrep, radius }).collect(),
        delta_table,
        delta_sum,
        divergent,
        f_mean: f.mean(),
        f_norms,
        c_series,
        c_fourier,
        class_bounds,
        k_clt,
        k_clt_l2,
        degenerate,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleDeltaRow {
    pub k: u64,
    pub delta: f64,
    pub projection_error: f64,
}

/// Spectral analysis on the circle; the series route for `C` is not available there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleAnalysisReport {
    pub flags: Flags,
    pub rate: CircleRate,
    /// The rate is pinned by the atoms (`q ≥ singular mass`), not the spectrum.
    pub singular_floor_flag: bool,
    pub window: usize,
    pub delta_table: Vec<CircleDeltaRow>,
    pub divergent: bool,
    pub f_mean: f64,
    pub f_norm2: f64,
    pub c_fourier: Option<SeriesValue>,
    pub notes: Vec<String>,
}

/// Circle analysis; `table_len` powers are computed by repeated convolution.
pub fn analyze_circle(
    f: &CircleFunction,
    nu: &CircleMeasure,
    dual: CircleDual,
    table_len: usize,
    tol: f64,
) -> Result<CircleAnalysisReport> {
    if !f.is_mean_zero() {
        return Err(Error::InvalidFunction("f must have mean zero".into()));
    }
    let rate = circle_rate_q(nu, dual, tol)?;
    let flags = Flags {
        adapted: nu.is_adapted(),
        strictly_aperiodic: nu.is_strictly_aperiodic(),
        abs_component: nu.has_abs_component(),
    };
    let mut notes = Vec::new();
    let mut delta_table = Vec::new();
    for k in 1..=table_len as u64 {
        match circle_delta_k(nu, k) {
            Ok(d) => delta_table.push(CircleDeltaRow { k, delta: d.value, projection_error: d.projection_error }),
            Err(Error::BreakpointCap { needed, cap }) => {
                notes.push(format!("Δ_k table stops at k = {}: grid needs {needed} breakpoints (cap {cap})", k - 1));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let divergent = rate.upper() >= 1.0 - Q_ONE_TOL;
    let singular_floor_flag = rate.singular_dominates() && rate.singular_floor > 0.0;
    if singular_floor_flag {
        notes.push(format!("q is set by the singular part: atom mass {}", rate.singular_floor));
    }
    let c_fourier = if divergent {
        notes.push("q = 1: no variance constant".into());
        None
    } else {
        Some(circle_c_fourier(f, nu, dual, rate.upper())?)
    };
    Ok(CircleAnalysisReport {
        flags,
        rate,
        singular_floor_flag,
        window: dual.window,
        delta_table,
        divergent,
        f_mean: f.mean(),
        f_norm2: f.norm(2.0),
        c_fourier,
        notes,
    })
}
