//! Irreducible unitary representations and Fourier coefficients.

pub mod builtin;
mod fourier;
mod irrep;
mod validate;

pub use builtin::{builtin_dual, cyclic_dual, dihedral_dual, quaternion_dual, symmetric_dual};
pub use fourier::{
    circle_fourier_function, circle_fourier_measure, circle_parseval, fourier_function, fourier_measure, parseval,
    FourierCoefficient, WindowedSum, PARSEVAL_TOL,
};
pub use irrep::{CMatrix, CircleDual, DualSet, Irrep, DEFAULT_CIRCLE_WINDOW, MAX_IRREP_DIM};
pub use validate::{validate_dual, DualReport, IrrepCheck, EXHAUSTIVE_HOMOMORPHISM, REPRESENTATION_TOL, UNITARITY_TOL};
