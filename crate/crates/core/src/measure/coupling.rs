use rand::distr::Distribution;
use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;

use crate::error::{Error, Result};
use crate::group::Element;
use crate::scalar::Scalar;

use super::FiniteMeasure;

/// A joint law on `G × G`, stored as a dense `n × n` table indexed `[t * n + u]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling<T: Scalar> {
    order: usize,
    joint: Vec<T>,
    offdiag_mass: T,
}

impl<T: Scalar> Coupling<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn joint(&self) -> &[T] {
        &self.joint
    }

    pub fn entry(&self, t: Element, u: Element) -> &T {
        &self.joint[t * self.order + u]
    }

    /// `Pr(T ≠ U)`.
    pub fn offdiag_mass(&self) -> &T {
        &self.offdiag_mass
    }

    pub fn row_marginal(&self) -> Vec<T> {
        let n = self.order;
        (0..n).map(|t| self.joint[t * n..(t + 1) * n].iter().fold(T::zero(), |a, w| a + w.clone())).collect()
    }

    pub fn column_marginal(&self) -> Vec<T> {
        let n = self.order;
        (0..n).map(|u| (0..n).fold(T::zero(), |a, t| a + self.joint[t * n + u].clone())).collect()
    }

    /// `1 − Σ_x joint(x, x)`.
    pub fn diagonal_defect(&self) -> T {
        let n = self.order;
        (0..n).fold(T::one(), |a, x| a - self.joint[x * n + x].clone())
    }

    pub fn sampler(&self) -> Result<CouplingSampler> {
        let weights: Vec<f64> = self.joint.iter().map(|w| w.as_f64().max(0.0)).collect();
        let alias = WeightedAliasIndex::new(weights).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
        Ok(CouplingSampler { order: self.order, alias })
    }
}

/// The maximal coupling of `ν` with Haar measure: diagonal `min(ν(x), 1/n)`,
/// leftovers coupled independently. Attains `Pr(T ≠ U) = ‖ν − μ‖_TV / 2`.
pub fn maximal_coupling<T: Scalar>(nu: &FiniteMeasure<T>) -> Coupling<T> {
    let n = nu.group().order();
    let u = T::ratio(1, n as i64);
    let diag: Vec<T> = nu.weights().iter().map(|w| T::min_of(w, &u)).collect();
    let left: Vec<T> = nu.weights().iter().zip(&diag).map(|(w, d)| w.clone() - d.clone()).collect();
    let right: Vec<T> = diag.iter().map(|d| u.clone() - d.clone()).collect();
    let offdiag_mass = left.iter().fold(T::zero(), |a, w| a + w.clone());
    let mut joint = vec![T::zero(); n * n];
    for t in 0..n {
        joint[t * n + t] = diag[t].clone();
        if offdiag_mass.is_zero() || left[t].is_zero() {
            continue;
        }
        for (s, r) in right.iter().enumerate() {
            if !r.is_zero() {
                joint[t * n + s] = joint[t * n + s].clone() + left[t].clone() * r.clone() / offdiag_mass.clone();
            }
        }
    }
    Coupling { order: n, joint, offdiag_mass }
}

/// Draws pairs `(T, U)` from a coupling table.
#[derive(Debug, Clone)]
pub struct CouplingSampler {
    order: usize,
    alias: WeightedAliasIndex<f64>,
}

impl CouplingSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (Element, Element) {
        let i = self.alias.sample(rng);
        (i / self.order, i % self.order)
    }
}

pub fn coupling_sample<R: Rng + ?Sized>(sampler: &CouplingSampler, rng: &mut R) -> (Element, Element) {
    sampler.sample(rng)
}

/// The exact joint law of `(g(V)U, V)` for `U` Haar-uniform and `V ~ γ` independent,
/// alongside the product of its marginals.
#[derive(Debug, Clone)]
pub struct IndependenceTable<T: Scalar> {
    /// `joint[b * m + v] = Pr(g(V)U = b, V = v)`.
    pub joint: Vec<T>,
    pub product: Vec<T>,
    pub values: usize,
}

impl<T: Scalar> IndependenceTable<T> {
    pub fn max_abs_diff(&self) -> f64 {
        self.joint.iter().zip(&self.product).map(|(a, b)| (a.clone() - b.clone()).abs().as_f64()).fold(0.0, f64::max)
    }

    pub fn is_product(&self) -> bool {
        self.joint == self.product
    }
}

/// Enumerates every `(u, v)` to tabulate the law of `(g(V)U, V)`.
pub fn shifted_uniform_table<T: Scalar>(
    group: &crate::group::FiniteGroup,
    gamma: &[T],
    g: impl Fn(usize) -> Element,
) -> Result<IndependenceTable<T>> {
    let n = group.order();
    let m = gamma.len();
    let u = T::ratio(1, n as i64);
    let mut joint = vec![T::zero(); n * m];
    for (v, p) in gamma.iter().enumerate() {
        let shift = g(v);
        group.check(shift)?;
        for x in 0..n {
            let b = group.mul(shift, x);
            joint[b * m + v] = joint[b * m + v].clone() + u.clone() * p.clone();
        }
    }
    let left: Vec<T> = (0..n).map(|b| (0..m).fold(T::zero(), |a, v| a + joint[b * m + v].clone())).collect();
    let right: Vec<T> = (0..m).map(|v| (0..n).fold(T::zero(), |a, b| a + joint[b * m + v].clone())).collect();
    let product = (0..n * m).map(|i| left[i / m].clone() * right[i % m].clone()).collect();
    Ok(IndependenceTable { joint, product, values: m })
}
