use std::collections::VecDeque;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::measure::same_group;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Largest irrep dimension accepted.
pub const MAX_IRREP_DIM: usize = 16;

/// Default frequency window `{−N, …, N}` for the circle dual.
pub const DEFAULT_CIRCLE_WINDOW: usize = 512;

/// A unitary representation of a finite group, one matrix per element.
#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    label: String,
    dim: usize,
    matrices: Vec<CMatrix>,
}

impl Irrep {
    pub fn new(label: impl Into<String>, matrices: Vec<CMatrix>) -> Result<Self> {
        let label = label.into();
        let dim = matrices.first().map(|m| m.nrows()).ok_or_else(|| Error::InvalidDual(format!("{label}: no matrices")))?;
        if dim == 0 || dim > MAX_IRREP_DIM {
            return Err(Error::InvalidDual(format!("{label}: dimension {dim} outside 1..={MAX_IRREP_DIM}")));
        }
        if matrices.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::InvalidDual(format!("{label}: matrices are not all {dim}x{dim}")));
        }
        Ok(Irrep { label, dim, matrices })
    }

    /// A one-dimensional representation from its character values.
    pub fn character(label: impl Into<String>, values: impl IntoIterator<Item = Complex64>) -> Result<Self> {
        Self::new(label, values.into_iter().map(|v| CMatrix::from_element(1, 1, v)).collect())
    }

    /// The trivial representation of a group of order `n`.
    pub fn trivial(n: usize) -> Self {
        Self::character("trivial", std::iter::repeat_n(Complex64::new(1.0, 0.0), n)).expect("n > 0")
    }

    /// Extends generator images to the whole group by `π(xs) = π(x)π(s)`.
    pub fn from_generators(label: impl Into<String>, group: &FiniteGroup, gens: &[(Element, CMatrix)]) -> Result<Self> {
        let label = label.into();
        let dim = gens.first().map(|(_, m)| m.nrows()).ok_or_else(|| Error::InvalidDual(format!("{label}: no generators")))?;
        let mut mats: Vec<Option<CMatrix>> = vec![None; group.order()];
        mats[group.identity()] = Some(CMatrix::identity(dim, dim));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (s, m) in gens {
                let y = group.mul(x, *s);
                if mats[y].is_none() {
                    mats[y] = Some(mats[x].as_ref().unwrap() * m);
                    queue.push_back(y);
                }
            }
        }
        let matrices = mats
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidDual(format!("{label}: generators do not generate the group")))?;
        Self::new(label, matrices)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    #[inline]
    pub fn matrix(&self, x: Element) -> &CMatrix {
        &self.matrices[x]
    }

    /// `χ_π(x) = tr π(x)`.
    pub fn character_value(&self, x: Element) -> Complex64 {
        self.matrices[x].trace()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim == 1 && self.matrices.iter().all(|m| (m[(0, 0)] - Complex64::new(1.0, 0.0)).norm() <= 1e-12)
    }

    /// The contragredient `π̄(x) = conj(π(x))`.
    pub fn conjugate(&self) -> Irrep {
        Irrep {
            label: format!("conj({})", self.label),
            dim: self.dim,
            matrices: self.matrices.iter().map(|m| m.map(|z| z.conj())).collect(),
        }
    }
}

/// A list of irreps of one finite group, trivial representation first.
#[derive(Debug, Clone)]
pub struct DualSet {
    group: Arc<FiniteGroup>,
    irreps: Vec<Irrep>,
}

impl DualSet {
    /// Checks shapes only; [`crate::repr::validate_dual`] checks the representation theory.
    pub fn new(group: Arc<FiniteGroup>, irreps: Vec<Irrep>) -> Result<Self> {
        if irreps.is_empty() {
            return Err(Error::InvalidDual("empty dual set".into()));
        }
        for pi in &irreps {
            if pi.matrices.len() != group.order() {
                return Err(Error::InvalidDual(format!(
                    "{}: {} matrices for group of order {}",
                    pi.label,
                    pi.matrices.len(),
                    group.order()
                )));
            }
        }
        Ok(DualSet { group, irreps })
    }

    /// Builds the set and rejects it unless every validation check passes.
    pub fn validated(group: Arc<FiniteGroup>, irreps: Vec<Irrep>) -> Result<Self> {
        let dual = Self::new(group, irreps)?;
        let report = super::validate_dual(&dual);
        if !report.pass {
            return Err(Error::InvalidDual(report.summary()));
        }
        Ok(dual)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    /// Irreps other than the trivial one.
    pub fn nontrivial(&self) -> impl Iterator<Item = &Irrep> {
        self.irreps.iter().filter(|p| !p.is_trivial())
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub(crate) fn check_group(&self, other: &Arc<FiniteGroup>) -> Result<()> {
        if same_group(&self.group, other) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// Index of the irrep whose character is the complex conjugate of `i`'s.
    pub fn contragredient_index(&self, i: usize) -> Option<usize> {
        let n = self.group.order();
        let pi = &self.irreps[i];
        self.irreps.iter().position(|rho| {
            rho.dim == pi.dim && (0..n).all(|x| (rho.character_value(x) - pi.character_value(x).conj()).norm() <= 1e-10)
        })
    }
}

/// The characters `e^{2πinx}` of the circle for `|n| ≤ window`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleDual {
    pub window: usize,
}

impl Default for CircleDual {
    fn default() -> Self {
        CircleDual { window: DEFAULT_CIRCLE_WINDOW }
    }
}

impl CircleDual {
    pub fn new(window: usize) -> Self {
        CircleDual { window }
    }

    pub fn frequencies(&self) -> impl Iterator<Item = i64> {
        let w = self.window as i64;
        -w..=w
    }
}
