//! Probability and signed measures, convolution, total variation and couplings.

mod circle;
mod coupling;
mod finite;
mod support;

pub use circle::{
    rational_approx, Atom, CircleMeasure, CircleSampler, Density, ATOM_MERGE_TOL, MAX_ATOMS, MAX_BREAKPOINTS,
    RATIONAL_DENOMINATOR_CAP,
};
pub use coupling::{coupling_sample, maximal_coupling, shifted_uniform_table, Coupling, CouplingSampler, IndependenceTable};
pub use finite::{convolution_power, convolve, tv_norm, FiniteMeasure, MASS_TOL};
pub(crate) use finite::same_group;
pub use support::{has_abs_component, is_adapted, is_strictly_aperiodic};
