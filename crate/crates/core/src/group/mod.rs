//! Concrete compact groups: finite groups via Cayley tables and the circle.

pub mod builtin;
mod circle;
mod finite;
mod subgroup;

pub use builtin::{cyclic, dihedral, quaternion8, symmetric, GroupSpec};
pub use circle::{reduce, CircleGroup};
pub use finite::{Element, FiniteGroup, EXHAUSTIVE_ASSOCIATIVITY, MAX_ORDER};
pub use subgroup::{generated_subgroup, normal_closure, normal_subgroups, Subgroup};
