use crate::error::{Error, Result};
use crate::group::{generated_subgroup, normal_closure};
use crate::scalar::Scalar;

use super::FiniteMeasure;

/// Whether the support of `ν` generates the whole group.
pub fn is_adapted<T: Scalar>(nu: &FiniteMeasure<T>) -> Result<bool> {
    let support = nu.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    Ok(generated_subgroup(nu.group(), &support)?.is_whole_group())
}

/// Whether the support of `ν` avoids every coset of a proper normal subgroup,
/// i.e. the normal closure of `{s₀⁻¹s : s ∈ supp ν}` is the whole group.
pub fn is_strictly_aperiodic<T: Scalar>(nu: &FiniteMeasure<T>) -> Result<bool> {
    let support = nu.support();
    let &s0 = support.first().ok_or(Error::EmptySupport)?;
    let g = nu.group();
    let inv = g.inverse(s0);
    let diffs: Vec<_> = support.iter().map(|&s| g.mul(inv, s)).collect();
    Ok(normal_closure(g, &diffs)?.is_whole_group())
}

/// On a finite group every measure is absolutely continuous with respect to Haar measure.
pub fn has_abs_component<T: Scalar>(_nu: &FiniteMeasure<T>) -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, symmetric};
    use std::sync::Arc;

    #[test]
    fn symmetric_three_predicates() {
        let g = Arc::new(symmetric(3).unwrap());
        let t = g.element_by_name("(1 2)").unwrap();
        let c = g.element_by_name("(1 2 3)").unwrap();
        let both = FiniteMeasure::<f64>::uniform_on(g.clone(), &[t, c]).unwrap();
        assert!(is_adapted(&both).unwrap());
        assert!(is_strictly_aperiodic(&both).unwrap());
        let single = FiniteMeasure::<f64>::delta(g.clone(), t).unwrap();
        assert!(!is_adapted(&single).unwrap());
        let transpositions: Vec<_> = ["(1 2)", "(1 3)", "(2 3)"].iter().map(|s| g.element_by_name(s).unwrap()).collect();
        let tr = FiniteMeasure::<f64>::uniform_on(g, &transpositions).unwrap();
        assert!(is_adapted(&tr).unwrap());
        assert!(!is_strictly_aperiodic(&tr).unwrap());
    }

    #[test]
    fn cyclic_predicates() {
        let z4 = Arc::new(cyclic(4).unwrap());
        let odd = FiniteMeasure::<f64>::uniform_on(z4, &[1, 3]).unwrap();
        assert!(is_adapted(&odd).unwrap());
        assert!(!is_strictly_aperiodic(&odd).unwrap());
        let z2 = Arc::new(cyclic(2).unwrap());
        let nu = FiniteMeasure::<f64>::new(z2, vec![0.25, 0.75]).unwrap();
        assert!(is_strictly_aperiodic(&nu).unwrap());
        assert!(has_abs_component(&nu));
    }

    #[test]
    fn empty_support_is_an_error() {
        let z2 = Arc::new(cyclic(2).unwrap());
        let zero = FiniteMeasure::<f64>::zero(z2);
        assert!(matches!(is_strictly_aperiodic(&zero), Err(Error::EmptySupport)));
    }
}
