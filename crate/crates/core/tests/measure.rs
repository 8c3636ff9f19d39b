use std::sync::Arc;

use haar_walk::group::{cyclic, dihedral, quaternion8, symmetric};
use haar_walk::measure::{
    convolution_power, coupling_sample, has_abs_component, is_adapted, is_strictly_aperiodic, maximal_coupling,
    shifted_uniform_table, Atom, Density,
};
use haar_walk::{BigRational, CircleMeasure, ExactMeasure, FiniteGroup, Measure};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn z2() -> Arc<FiniteGroup> {
    Arc::new(cyclic(2).unwrap())
}

#[test]
fn convolution_examples() {
    let g = Arc::new(symmetric(3).unwrap());
    let a = Measure::delta(g.clone(), 1).unwrap();
    let b = Measure::delta(g.clone(), 4).unwrap();
    assert_eq!(a.convolve(&b).unwrap().support(), vec![g.mul(1, 4)]);
    let nu = ExactMeasure::new(z2(), vec![q(1, 4), q(3, 4)]).unwrap();
    assert_eq!(nu.convolve(&nu).unwrap().weights(), &[q(5, 8), q(3, 8)]);
    assert_eq!(convolution_power(&nu, 1).unwrap().weights(), nu.weights());
    let z4 = Arc::new(cyclic(4).unwrap());
    let rot = ExactMeasure::delta(z4.clone(), 1).unwrap();
    assert_eq!(rot.power(3).unwrap().support(), vec![3]);
}

#[test]
fn tv_examples() {
    let nu = ExactMeasure::new(z2(), vec![q(1, 4), q(3, 4)]).unwrap();
    assert!(nu.sub(&nu).unwrap().tv_norm().is_zero());
    assert_eq!(nu.minus_haar().tv_norm(), q(1, 2));
    for n in 2..=9 {
        let g = Arc::new(cyclic(n).unwrap());
        let d = ExactMeasure::delta(g, 0).unwrap();
        assert_eq!(d.minus_haar().tv_norm(), q(2 * (n as i64 - 1), n as i64));
    }
}

#[test]
fn support_predicates() {
    let s3 = Arc::new(symmetric(3).unwrap());
    let t12 = s3.element_by_name("(1 2)").unwrap();
    let r = s3.element_by_name("(1 2 3)").unwrap();
    let transpositions: Vec<usize> = ["(1 2)", "(1 3)", "(2 3)"].iter().map(|s| s3.element_by_name(s).unwrap()).collect();
    assert!(is_adapted(&Measure::uniform_on(s3.clone(), &[t12, r]).unwrap()).unwrap());
    assert!(!is_adapted(&Measure::delta(s3.clone(), t12).unwrap()).unwrap());
    let odd = Measure::uniform_on(s3.clone(), &transpositions).unwrap();
    assert!(is_adapted(&odd).unwrap());
    assert!(!is_strictly_aperiodic(&odd).unwrap());
    let z4 = Arc::new(cyclic(4).unwrap());
    let pm = Measure::uniform_on(z4, &[1, 3]).unwrap();
    assert!(is_adapted(&pm).unwrap());
    assert!(!is_strictly_aperiodic(&pm).unwrap());
    let nu = Measure::new(z2(), vec![0.25, 0.75]).unwrap();
    assert!(is_strictly_aperiodic(&nu).unwrap());
    assert!(has_abs_component(&nu));
}

#[test]
fn circle_examples() {
    let pure = CircleMeasure::haar();
    assert!(pure.lebesgue_decompose().1.is_empty());
    let atom = CircleMeasure::dirac(1.0 / 3.0);
    assert!(atom.lebesgue_decompose().0.is_zero());
    assert!(!atom.has_abs_component());
    let mixed = CircleMeasure::new(vec![Atom { location: 0.0, mass: 0.5 }], Density::constant(0.5)).unwrap();
    let (abs, sing) = mixed.lebesgue_decompose();
    assert!((abs.mass() - 0.5).abs() < 1e-12);
    assert!((sing[0].mass - 0.5).abs() < 1e-12);
    assert!(mixed.has_abs_component());
    let f = CircleMeasure::dirac(0.5).fourier(1);
    assert!((f.re + 1.0).abs() < 1e-12 && f.im.abs() < 1e-12);
}

#[test]
fn coupling_examples_and_sampling() {
    let nu = ExactMeasure::new(z2(), vec![q(1, 4), q(3, 4)]).unwrap();
    assert_eq!(maximal_coupling(&nu).offdiag_mass(), &q(1, 4));
    assert_eq!(maximal_coupling(&ExactMeasure::delta(z2(), 0).unwrap()).offdiag_mass(), &q(1, 2));
    assert!(maximal_coupling(&ExactMeasure::uniform(z2())).offdiag_mass().is_zero());

    let c = maximal_coupling(&Measure::new(z2(), vec![0.25, 0.75]).unwrap());
    let sampler = c.sampler().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draws = 1_000_000;
    let (mut mismatch, mut col0) = (0u64, 0u64);
    for _ in 0..draws {
        let (t, u) = coupling_sample(&sampler, &mut rng);
        mismatch += (t != u) as u64;
        col0 += (u == 0) as u64;
    }
    assert!((mismatch as f64 / draws as f64 - 0.25).abs() < 0.0015);
    assert!((col0 as f64 / draws as f64 - 0.5).abs() < 0.002);
}

fn instance() -> impl Strategy<Value = (Arc<FiniteGroup>, Vec<u32>)> {
    let groups: Vec<Arc<FiniteGroup>> = vec![
        Arc::new(cyclic(5).unwrap()),
        Arc::new(symmetric(3).unwrap()),
        Arc::new(dihedral(4).unwrap()),
        Arc::new(quaternion8().unwrap()),
    ];
    (0..groups.len()).prop_flat_map(move |i| {
        let g = groups[i].clone();
        let n = g.order();
        (Just(g), prop::collection::vec(0u32..6, n).prop_filter("nonzero", |w| w.iter().any(|&x| x > 0)))
    })
}

fn exact(g: &Arc<FiniteGroup>, w: &[u32]) -> ExactMeasure {
    ExactMeasure::from_unnormalized(g.clone(), w.iter().map(|&x| q(x as i64, 1)).collect()).unwrap()
}

proptest! {
    #[test]
    fn maximal_coupling_is_exact((g, w) in instance()) {
        let nu = exact(&g, &w);
        let c = maximal_coupling(&nu);
        prop_assert_eq!(c.offdiag_mass().clone(), nu.minus_haar().tv_norm() / q(2, 1));
        prop_assert_eq!(c.row_marginal(), nu.weights().to_vec());
        prop_assert!(c.column_marginal().iter().all(|x| *x == q(1, g.order() as i64)));
    }

    #[test]
    fn convolution_is_associative_and_absorbs_haar((g, w) in instance(), k in 1u64..4) {
        let a = exact(&g, &w);
        let b = a.power(k).unwrap();
        let c = a.reflected();
        prop_assert_eq!(a.convolve(&b).unwrap().convolve(&c).unwrap(), a.convolve(&b.convolve(&c).unwrap()).unwrap());
        let mu = ExactMeasure::uniform(g.clone());
        prop_assert_eq!(a.convolve(&mu).unwrap(), mu.clone());
        prop_assert_eq!(mu.convolve(&a).unwrap(), mu);
        prop_assert!(a.power(k).unwrap().total_mass().is_one());
    }

    #[test]
    fn shifted_uniform_is_independent((g, w) in instance(), map in prop::collection::vec(0usize..64, 6)) {
        let m = map.len();
        let gamma: Vec<BigRational> = (0..m).map(|v| q(w[v % w.len()] as i64 + 1, 1)).collect();
        let total = gamma.iter().fold(BigRational::zero(), |a, b| a + b);
        let gamma: Vec<BigRational> = gamma.into_iter().map(|x| x / total.clone()).collect();
        let n = g.order();
        let table = shifted_uniform_table(&g, &gamma, |v| map[v] % n).unwrap();
        prop_assert!(table.is_product());
        let approx: Vec<f64> = gamma.iter().map(num_traits::ToPrimitive::to_f64).map(Option::unwrap).collect();
        prop_assert!(shifted_uniform_table(&g, &approx, |v| map[v] % n).unwrap().max_abs_diff() <= 1e-12);
    }
}
