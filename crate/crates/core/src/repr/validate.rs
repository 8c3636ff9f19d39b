use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CMatrix, DualSet, Irrep};
use crate::group::FiniteGroup;

/// Unitarity tolerance (max entry of `π(x)π(x)* − I`).
pub const UNITARITY_TOL: f64 = 1e-12;
/// Tolerance for homomorphism defects and character inner products.
pub const REPRESENTATION_TOL: f64 = 1e-10;
/// Orders up to this bound get an exhaustive homomorphism check.
pub const EXHAUSTIVE_HOMOMORPHISM: usize = 64;
const RANDOM_HOMOMORPHISM_PAIRS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct IrrepCheck {
    pub label: String,
    pub dim: usize,
    pub unitarity_defect: f64,
    pub homomorphism_defect: f64,
    /// `⟨χ_π, χ_π⟩`, which is 1 exactly when π is irreducible.
    pub character_norm: f64,
    pub unitary: bool,
    pub homomorphism: bool,
    pub irreducible: bool,
}

impl IrrepCheck {
    pub fn pass(&self) -> bool {
        self.unitary && self.homomorphism && self.irreducible
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualReport {
    pub order: usize,
    pub irreps: Vec<IrrepCheck>,
    pub trivial_first: bool,
    /// Largest `|⟨χ_π, χ_ρ⟩|` over distinct pairs.
    pub max_cross_inner: f64,
    pub inequivalent: bool,
    /// `Σ d_π²`.
    pub dimension_sum: usize,
    pub complete: bool,
    pub pass: bool,
}

impl DualReport {
    pub fn summary(&self) -> String {
        let mut problems = Vec::new();
        for c in &self.irreps {
            if !c.unitary {
                problems.push(format!("{}: not unitary (defect {:e})", c.label, c.unitarity_defect));
            }
            if !c.homomorphism {
                problems.push(format!("{}: not a homomorphism (defect {:e})", c.label, c.homomorphism_defect));
            }
            if !c.irreducible {
                problems.push(format!("{}: reducible (<chi,chi> = {})", c.label, c.character_norm));
            }
        }
        if !self.trivial_first {
            problems.push("trivial representation is not first".into());
        }
        if !self.inequivalent {
            problems.push(format!("characters not orthogonal (max |<chi,rho>| = {:e})", self.max_cross_inner));
        }
        if !self.complete {
            problems.push(format!("sum of d^2 is {} but |G| = {}", self.dimension_sum, self.order));
        }
        if problems.is_empty() {
            "ok".into()
        } else {
            problems.join("; ")
        }
    }
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn characters(g: &FiniteGroup, pi: &Irrep) -> Vec<Complex64> {
    (0..g.order()).map(|x| pi.character_value(x)).collect()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>() / a.len() as f64
}

fn check_irrep(g: &FiniteGroup, pi: &Irrep) -> IrrepCheck {
    let d = pi.dim();
    let eye = CMatrix::identity(d, d);
    let unitarity_defect = pi.matrices().iter().map(|m| max_entry(&(m * m.adjoint() - &eye))).fold(0.0, f64::max);
    let n = g.order();
    let defect = |a: usize, b: usize| max_entry(&(pi.matrix(g.mul(a, b)) - pi.matrix(a) * pi.matrix(b)));
    let homomorphism_defect = if n <= EXHAUSTIVE_HOMOMORPHISM {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| defect(a, b)).fold(0.0, f64::max)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1e1e_2024);
        (0..RANDOM_HOMOMORPHISM_PAIRS)
            .map(|_| defect(rng.random_range(0..n), rng.random_range(0..n)))
            .fold(0.0, f64::max)
    };
    let chi = characters(g, pi);
    let character_norm = inner(&chi, &chi).re;
    IrrepCheck {
        label: pi.label().to_string(),
        dim: d,
        unitarity_defect,
        homomorphism_defect,
        character_norm,
        unitary: unitarity_defect <= UNITARITY_TOL,
        homomorphism: homomorphism_defect <= REPRESENTATION_TOL,
        irreducible: (character_norm - 1.0).abs() <= REPRESENTATION_TOL,
    }
}

/// Checks unitarity, homomorphism, irreducibility, pairwise inequivalence and completeness.
pub fn validate_dual(dual: &DualSet) -> DualReport {
    let g = dual.group();
    let irreps: Vec<IrrepCheck> = dual.irreps().iter().map(|pi| check_irrep(g, pi)).collect();
    let chars: Vec<Vec<Complex64>> = dual.irreps().iter().map(|pi| characters(g, pi)).collect();
    let mut max_cross_inner = 0.0f64;
    for i in 0..chars.len() {
        for j in i + 1..chars.len() {
            max_cross_inner = max_cross_inner.max(inner(&chars[i], &chars[j]).norm());
        }
    }
    let inequivalent = max_cross_inner <= REPRESENTATION_TOL;
    let dimension_sum = dual.irreps().iter().map(|p| p.dim() * p.dim()).sum();
    let complete = dimension_sum == g.order();
    let trivial_first = dual.irreps()[0].is_trivial();
    let pass = irreps.iter().all(IrrepCheck::pass) && inequivalent && complete && trivial_first;
    DualReport { order: g.order(), irreps, trivial_first, max_cross_inner, inequivalent, dimension_sum, complete, pass }
}
