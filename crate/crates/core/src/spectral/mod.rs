//! The computable constants of a random walk: `Δ_k`, the rate `q`, `Δ`,
//! the variance constant `C(f, ν)` by two routes, and Berry–Esseen constants.
//!
//! All logarithms are natural.

mod constants;
mod delta;
mod rate;
mod report;
mod variance;

pub use constants::{berry_esseen_k, berry_esseen_k_l2, berry_esseen_rate, iterated_log, phi, Interval};
pub use delta::{
    circle_delta_k, delta_k, delta_sequence, delta_tail_bound, delta_total, delta_total_with, weighted_delta_tail_bound,
    CircleDelta, DeltaTotal, DeviationIter, DEFAULT_MAX_TERMS,
};
pub use rate::{circle_rate_q, rate_q, spectral_radii, spectral_radius, CircleRate};
pub use report::{
    analyze, analyze_circle, AnalysisOptions, AnalysisReport, CircleAnalysisReport, CircleDeltaRow, Flags, RadiusEntry,
    C_ZERO_TOL, Q_ONE_TOL,
};
pub use variance::{
    autocovariance, autocovariances, b_nu, c_fourier, c_series, c_series_with, circle_c_fourier, class_central_bounds,
    self_correlation, variance_exact, variance_exact_series, variance_remainder_bound, BracketHypothesis, ClassBounds,
    FourierTerm, FourierValue, SeriesValue, NONNEG_TOL, SINGULAR_TOL,
};
