//! Finite-N verdicts on the strong law, the iterated logarithm and the CLT.

mod ks;
mod verdict;

pub use ks::{ks_noise_floor, ks_statistic, normal_cdf};
pub use verdict::{
    clt_verdict, lil_verdict, moment_growth_verdict, phi_normalized_trace, slln_verdict, Law, LawVerdict, Reference,
    TracePoint, DEGENERATE_CAP, LIL_BRACKET, LIL_FINITE_CAP, MIN_CLT_REPLICAS, SLLN_CAP, SLOPE_SLACK,
};
