//! Seeded, parallel Monte Carlo simulation of `S_k = X_1⋯X_k` and `Σ f(S_k)`.
//!
//! Replica `r` draws from a ChaCha8 stream keyed by `(seed, r)`, so results do
//! not depend on thread count or scheduling.

mod batch;
mod exact;
mod space;

pub use batch::{
    checkpoint_moments, replica_rng, run_batch, shifted_moment_estimate, MomentEstimate, TrajectoryBatch, WalkConfig,
    DEFAULT_BUDGET,
};
pub use exact::second_moment_from_identity;
pub use space::{sample_increment, CircleSpace, FiniteSpace, IncrementSampler, WalkSpace, DEFAULT_CIRCLE_CELLS};
