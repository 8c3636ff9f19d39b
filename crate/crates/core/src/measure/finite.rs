use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::scalar::Scalar;

/// Tolerance on the total mass of a floating-point probability measure.
pub const MASS_TOL: f64 = 1e-12;

/// A (possibly signed) measure on a finite group, stored as a weight per element.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasure<T: Scalar> {
    group: Arc<FiniteGroup>,
    weights: Vec<T>,
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<T: Scalar> FiniteMeasure<T> {
    /// A probability measure: nonnegative weights with total mass 1.
    pub fn new(group: Arc<FiniteGroup>, weights: Vec<T>) -> Result<Self> {
        let m = Self::signed(group, weights)?;
        if m.weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure("negative weight".into()));
        }
        if !m.total_mass().close_to(&T::one(), MASS_TOL) {
            return Err(Error::InvalidMeasure(format!("total mass {:?} is not 1", m.total_mass())));
        }
        Ok(m)
    }

    /// A signed measure with arbitrary weights.
    pub fn signed(group: Arc<FiniteGroup>, weights: Vec<T>) -> Result<Self> {
        if weights.len() != group.order() {
            return Err(Error::InvalidMeasure(format!(
                "{} weights for group of order {}",
                weights.len(),
                group.order()
            )));
        }
        Ok(FiniteMeasure { group, weights })
    }

    /// Normalizes nonnegative weights to a probability measure.
    pub fn from_unnormalized(group: Arc<FiniteGroup>, weights: Vec<T>) -> Result<Self> {
        let total = weights.iter().fold(T::zero(), |acc, w| acc + w.clone());
        if !total.is_positive() {
            return Err(Error::EmptySupport);
        }
        let weights = weights.into_iter().map(|w| w / total.clone()).collect();
        Self::new(group, weights)
    }

    /// The normalized Haar measure μ.
    pub fn uniform(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let w = T::ratio(1, n as i64);
        FiniteMeasure { group, weights: vec![w; n] }
    }

    /// The point mass δ_a.
    pub fn delta(group: Arc<FiniteGroup>, a: Element) -> Result<Self> {
        group.check(a)?;
        let mut weights = vec![T::zero(); group.order()];
        weights[a] = T::one();
        Ok(FiniteMeasure { group, weights })
    }

    /// Uniform on a nonempty set of elements (repeats count with multiplicity).
    pub fn uniform_on(group: Arc<FiniteGroup>, set: &[Element]) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut weights = vec![T::zero(); group.order()];
        let w = T::ratio(1, set.len() as i64);
        for &x in set {
            group.check(x)?;
            weights[x] = weights[x].clone() + w.clone();
        }
        Ok(FiniteMeasure { group, weights })
    }

    /// The zero measure.
    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        FiniteMeasure { group, weights: vec![T::zero(); n] }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, x: Element) -> &T {
        &self.weights[x]
    }

    /// Indices with nonzero weight.
    pub fn support(&self) -> Vec<Element> {
        (0..self.weights.len()).filter(|&x| !self.weights[x].is_zero()).collect()
    }

    pub fn total_mass(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, w| acc + w.clone())
    }

    pub fn is_probability(&self) -> bool {
        self.weights.iter().all(|w| !w.is_negative()) && self.total_mass().close_to(&T::one(), MASS_TOL)
    }

    fn check_same_group(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `self * other`: the law of `XY` for independent `X ~ self`, `Y ~ other`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same_group(other)?;
        let g = &self.group;
        let mut out = vec![T::zero(); g.order()];
        let right: Vec<(Element, &T)> = other.support().into_iter().map(|y| (y, &other.weights[y])).collect();
        for (x, a) in self.weights.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(y, b) in &right {
                let z = g.mul(x, y);
                out[z] = out[z].clone() + a.clone() * b.clone();
            }
        }
        Ok(FiniteMeasure { group: g.clone(), weights: out })
    }

    /// `self^{*k}` by binary powering (fixed association order).
    pub fn power(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("convolution power needs k >= 1".into()));
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut k = k;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.convolve(&base)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.convolve(&base)?;
        }
        Ok(result.expect("k >= 1"))
    }

    /// `self − other` as a signed measure.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_group(other)?;
        let weights = self.weights.iter().zip(&other.weights).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(FiniteMeasure { group: self.group.clone(), weights })
    }

    /// `self − μ`.
    pub fn minus_haar(&self) -> Self {
        let u = T::ratio(1, self.group.order() as i64);
        let weights = self.weights.iter().map(|a| a.clone() - u.clone()).collect();
        FiniteMeasure { group: self.group.clone(), weights }
    }

    /// Subtracts the mean weight so the total mass is exactly zero.
    pub fn centered(&self) -> Self {
        let n = T::from_usize(self.group.order()).expect("order fits");
        let mean = self.total_mass() / n;
        let weights = self.weights.iter().map(|a| a.clone() - mean.clone()).collect();
        FiniteMeasure { group: self.group.clone(), weights }
    }

    /// `‖ϑ‖_TV = Σ_x |ϑ(x)|`, so distances between probability measures lie in `[0, 2]`.
    pub fn tv_norm(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, w| acc + w.abs())
    }

    /// `ν*(B) = ν(B⁻¹)`.
    pub fn reflected(&self) -> Self {
        let g = &self.group;
        let weights = (0..g.order()).map(|x| self.weights[g.inverse(x)].clone()).collect();
        FiniteMeasure { group: g.clone(), weights }
    }

    /// Whether `ν(g⁻¹xg) = ν(x)` for all `x, g`.
    pub fn is_central(&self, tol: f64) -> bool {
        let g = &self.group;
        (0..g.order()).all(|x| (0..g.order()).all(|y| self.weights[g.conjugate(x, y)].close_to(&self.weights[x], tol)))
    }

    /// Whether `ν * ν* = ν* * ν`.
    pub fn is_normal(&self, tol: f64) -> Result<bool> {
        let r = self.reflected();
        let a = self.convolve(&r)?;
        let b = r.convolve(self)?;
        Ok(a.weights.iter().zip(&b.weights).all(|(x, y)| x.close_to(y, tol)))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> FiniteMeasure<U> {
        FiniteMeasure { group: self.group.clone(), weights: self.weights.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> FiniteMeasure<f64> {
        self.map(|w| w.as_f64())
    }

    /// `∫ f dϑ`.
    pub fn integrate(&self, f: impl Fn(Element) -> f64) -> f64 {
        self.weights.iter().enumerate().map(|(x, w)| w.as_f64() * f(x)).sum()
    }
}

pub fn convolve<T: Scalar>(a: &FiniteMeasure<T>, b: &FiniteMeasure<T>) -> Result<FiniteMeasure<T>> {
    a.convolve(b)
}

pub fn convolution_power<T: Scalar>(nu: &FiniteMeasure<T>, k: u64) -> Result<FiniteMeasure<T>> {
    nu.power(k)
}

pub fn tv_norm<T: Scalar>(m: &FiniteMeasure<T>) -> T {
    m.tv_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, symmetric};
    use num_rational::BigRational;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(cyclic(2).unwrap())
    }

    #[test]
    fn z2_square_is_five_eighths() {
        let nu = FiniteMeasure::<BigRational>::new(z2(), vec![BigRational::ratio(1, 4), BigRational::ratio(3, 4)]).unwrap();
        let sq = nu.power(2).unwrap();
        assert_eq!(sq.weights(), &[BigRational::ratio(5, 8), BigRational::ratio(3, 8)]);
        assert_eq!(nu.minus_haar().tv_norm(), BigRational::ratio(1, 2));
    }

    #[test]
    fn rotation_power() {
        let g = Arc::new(cyclic(4).unwrap());
        let d = FiniteMeasure::<f64>::delta(g.clone(), 1).unwrap();
        assert_eq!(d.power(3).unwrap(), FiniteMeasure::delta(g, 3).unwrap());
    }

    #[test]
    fn delta_distance_to_haar() {
        for n in 1..8 {
            let g = Arc::new(cyclic(n).unwrap());
            let d = FiniteMeasure::<BigRational>::delta(g, 0).unwrap();
            assert_eq!(d.minus_haar().tv_norm(), BigRational::ratio(2 * (n as i64 - 1), n as i64));
        }
    }

    #[test]
    fn haar_absorbs() {
        let g = Arc::new(symmetric(3).unwrap());
        let nu = FiniteMeasure::<f64>::uniform_on(g.clone(), &[1, 2, 2]).unwrap();
        let mu = FiniteMeasure::uniform(g);
        let a = nu.convolve(&mu).unwrap();
        let b = mu.convolve(&nu).unwrap();
        for x in 0..6 {
            assert!((a.weight(x) - 1.0 / 6.0).abs() < 1e-15);
            assert!((b.weight(x) - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(FiniteMeasure::<f64>::new(z2(), vec![0.5, 0.6]).is_err());
        assert!(FiniteMeasure::<f64>::new(z2(), vec![1.5, -0.5]).is_err());
        assert!(FiniteMeasure::<f64>::new(z2(), vec![1.0]).is_err());
        let other = Arc::new(cyclic(3).unwrap());
        let a = FiniteMeasure::<f64>::uniform(z2());
        let b = FiniteMeasure::<f64>::uniform(other);
        assert!(matches!(a.convolve(&b), Err(Error::GroupMismatch)));
    }

    #[test]
    fn reflection_and_centrality() {
        let g = Arc::new(symmetric(3).unwrap());
        let c = g.element_by_name("(1 2 3)").unwrap();
        let nu = FiniteMeasure::<f64>::delta(g.clone(), c).unwrap();
        assert_eq!(nu.reflected().support(), vec![g.inverse(c)]);
        assert!(!nu.is_central(0.0));
        assert!(nu.is_normal(0.0).unwrap());
        let classes = g.conjugacy_classes();
        let three_cycles = classes.iter().find(|k| k.contains(&c)).unwrap();
        assert!(FiniteMeasure::<f64>::uniform_on(g, three_cycles).unwrap().is_central(1e-15));
    }
}
