use std::sync::Arc;

use haar_walk::group::{cyclic, symmetric};
use haar_walk::measure::Density;
use haar_walk::sim::{
    replica_rng, run_batch, sample_increment, second_moment_from_identity, shifted_moment_estimate, CircleSpace,
    FiniteSpace, IncrementSampler, WalkConfig, DEFAULT_CIRCLE_CELLS,
};
use haar_walk::spectral::variance_exact;
use haar_walk::stats::ks_statistic;
use haar_walk::{CircleFunction, CircleMeasure, Error, FiniteGroup, Measure, TestFunction};

fn z2() -> Arc<FiniteGroup> {
    Arc::new(cyclic(2).unwrap())
}

fn z2_instance() -> (Measure, TestFunction) {
    let g = z2();
    (Measure::new(g.clone(), vec![0.25, 0.75]).unwrap(), TestFunction::new(g, vec![1.0, -1.0]).unwrap())
}

#[test]
fn increment_frequencies() {
    let g = Arc::new(symmetric(3).unwrap());
    let s = IncrementSampler::new(&Measure::delta(g, 4).unwrap()).unwrap();
    let mut rng = replica_rng(1, 0);
    assert!((0..100).all(|_| sample_increment(&s, &mut rng) == 4));

    let (nu, _) = z2_instance();
    let s = IncrementSampler::new(&nu).unwrap();
    let draws = 1_000_000;
    let ones = (0..draws).filter(|_| s.sample(&mut rng) == 1).count();
    assert!((ones as f64 / draws as f64 - 0.75).abs() < 0.0015);

    let sampler = CircleMeasure::new(Vec::new(), Density::constant(1.0)).unwrap().sampler().unwrap();
    let xs: Vec<f64> = (0..draws).map(|_| sampler.sample(&mut rng)).collect();
    assert!(ks_statistic(&xs, |x| x.clamp(0.0, 1.0)) <= 0.002);
}

#[test]
fn identity_walk_sums_are_linear() {
    let g = Arc::new(symmetric(3).unwrap());
    let f = TestFunction::new(g.clone(), vec![0.5, -1.0, 2.0, 0.0, 1.5, -3.0]).unwrap();
    let space = FiniteSpace::new(&Measure::delta(g.clone(), g.identity()).unwrap(), &f).unwrap();
    let cfg = WalkConfig::new(1000, 4, 9).with_checkpoints([1, 10, 100]);
    let batch = run_batch(&space, &cfg).unwrap();
    let fe = f.value(g.identity());
    for r in 0..4 {
        for (i, &c) in batch.checkpoints.iter().enumerate() {
            assert_eq!(batch.sum(r, i), c as f64 * fe);
        }
        assert_eq!(batch.counts_of(r).iter().sum::<u64>(), 1000);
    }
}

#[test]
fn rotation_sums_stay_bounded() {
    let g = Arc::new(cyclic(4).unwrap());
    let f = TestFunction::centered_indicator(g.clone(), &[0]).unwrap();
    let space = FiniteSpace::new(&Measure::delta(g, 1).unwrap(), &f).unwrap();
    let cfg = WalkConfig::new(103, 1, 0).with_checkpoints(1..=103);
    let batch = run_batch(&space, &cfg).unwrap();
    for i in 0..103 {
        assert!(batch.sum(0, i).abs() <= 0.75 + 1e-12);
    }
}

#[test]
fn z2_occupation_frequency() {
    let (nu, f) = z2_instance();
    let space = FiniteSpace::new(&nu, &f).unwrap();
    let batch = run_batch(&space, &WalkConfig::new(10_000, 1000, 3)).unwrap();
    let freq: f64 = (0..1000).map(|r| batch.counts_of(r)[0] as f64 / 10_000.0).sum::<f64>() / 1000.0;
    assert!((freq - 0.5).abs() < 0.005);
}

#[test]
fn batches_are_deterministic_and_thread_independent() {
    let (nu, f) = z2_instance();
    let space = FiniteSpace::new(&nu, &f).unwrap();
    let cfg = WalkConfig::new(5000, 64, 77).with_checkpoints([50, 500]).with_lil(true);
    let a = run_batch(&space, &cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| run_batch(&space, &cfg).unwrap());
    assert_eq!(a, b);
    let c = run_batch(&space, &WalkConfig { seed: 78, ..cfg }).unwrap();
    assert_ne!(a.sums, c.sums);
}

#[test]
fn budget_is_enforced() {
    let (nu, f) = z2_instance();
    let space = FiniteSpace::new(&nu, &f).unwrap();
    let cfg = WalkConfig::new(1000, 1000, 0).with_budget(999_999);
    assert!(matches!(run_batch(&space, &cfg), Err(Error::Budget { .. })));
    assert!(run_batch(&space, &WalkConfig::new(10, 1, 0).with_checkpoints([11])).is_err());
}

#[test]
fn terminal_law_matches_convolution_power() {
    let g = Arc::new(symmetric(3).unwrap());
    let nu = Measure::new(g.clone(), vec![0.1, 0.3, 0.0, 0.2, 0.4, 0.0]).unwrap();
    let f = TestFunction::zero(g.clone());
    let space = FiniteSpace::new(&nu, &f).unwrap();
    for n in [1u64, 3, 6] {
        let batch = run_batch(&space, &WalkConfig::new(n, 1_000_000, n).with_counts(false)).unwrap();
        let mut emp = vec![0.0; 6];
        for &x in &batch.terminal_cells {
            emp[x] += 1e-6;
        }
        let exact = nu.power(n).unwrap();
        let tv: f64 = emp.iter().zip(exact.weights()).map(|(a, b)| (a - b).abs()).sum();
        assert!(tv < 0.01, "N = {n}: TV {tv}");
    }
}

#[test]
fn stationary_start_visits_uniformly() {
    let g = Arc::new(symmetric(3).unwrap());
    let t = g.element_by_name("(1 2)").unwrap();
    let f = TestFunction::zero(g.clone());
    let space = FiniteSpace::new(&Measure::delta(g, t).unwrap(), &f).unwrap();
    let batch = run_batch(&space, &WalkConfig::new(20, 60_000, 4).stationary(true)).unwrap();
    let total = batch.total_counts();
    let draws = 20.0 * 60_000.0;
    // Each visit is uniform; consecutive visits are dependent, so bound via replicas.
    let sigma = (60_000.0f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt() * 20.0;
    for c in total {
        assert!((c as f64 - draws / 6.0).abs() < 4.0 * sigma);
    }
}

#[test]
fn circle_walk_runs() {
    let nu = CircleMeasure::arc(0.0, 0.3).unwrap();
    let f = CircleFunction::trig(0.0, vec![1.0], Vec::new());
    let space = CircleSpace::new(&nu, &f, DEFAULT_CIRCLE_CELLS).unwrap();
    let batch = run_batch(&space, &WalkConfig::new(2000, 200, 1).stationary(true)).unwrap();
    let total = batch.total_counts();
    let expected = 2000.0 * 200.0 / 64.0;
    assert!(total.iter().all(|&c| (c as f64 - expected).abs() < 0.1 * expected));
    assert!(batch.final_sums().iter().all(|s| s.is_finite()));
}

#[test]
fn haar_increments_give_independent_second_moment() {
    let g = Arc::new(symmetric(3).unwrap());
    let f = TestFunction::new(g.clone(), vec![1.0, -2.0, 0.5, 0.5, 1.0, -1.0]).unwrap();
    let space = FiniteSpace::new(&Measure::uniform(g), &f).unwrap();
    let est = shifted_moment_estimate(&space, &WalkConfig::new(1, 10_000, 8), 5, 200, 2).unwrap();
    let expected = f.norm(2).powi(2) * 200.0;
    assert!((est.mean - expected).abs() < 3.0 * est.std_error, "{est:?} vs {expected}");

    let zero = TestFunction::zero(f.group().clone());
    let space = FiniteSpace::new(&Measure::uniform(f.group().clone()), &zero).unwrap();
    assert_eq!(shifted_moment_estimate(&space, &WalkConfig::new(1, 100, 8), 0, 50, 3).unwrap().mean, 0.0);
}

#[test]
fn z2_second_moment_against_exact_oracles() {
    let (nu, f) = z2_instance();
    let exact = second_moment_from_identity(&f, &nu, 1000).unwrap();
    let stationary = variance_exact(&f, &nu, 1000).unwrap();
    assert!((exact - stationary).abs() < 2.0);
    let space = FiniteSpace::new(&nu, &f).unwrap();
    let est = shifted_moment_estimate(&space, &WalkConfig::new(1, 10_000, 2024), 0, 1000, 2).unwrap();
    assert!((est.mean - exact).abs() < 3.0 * est.std_error, "{est:?} vs {exact}");
}

#[test]
fn second_moment_oracle_small_cases() {
    let (nu, f) = z2_instance();
    assert!((second_moment_from_identity(&f, &nu, 1).unwrap() - 1.0).abs() < 1e-15);
    let mut brute = 0.0;
    for x1 in 0..2 {
        for x2 in 0..2 {
            let p = nu.weights()[x1] * nu.weights()[x2];
            let s = f.value(x1) + f.value((x1 + x2) % 2);
            brute += p * s * s;
        }
    }
    assert!((second_moment_from_identity(&f, &nu, 2).unwrap() - brute).abs() < 1e-15);
}

#[test]
fn shifted_uniform_is_empirically_independent() {
    use rand::Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    let g = Arc::new(symmetric(3).unwrap());
    let gamma = Measure::new(g.clone(), vec![0.4, 0.1, 0.1, 0.2, 0.15, 0.05]).unwrap();
    let v_sampler = IncrementSampler::new(&gamma).unwrap();
    let shift = |v: usize| (v * v + 1) % 6;
    let mut rng = replica_rng(31, 0);
    let draws = 600_000;
    let mut table = vec![0.0f64; 36];
    for _ in 0..draws {
        let v = v_sampler.sample(&mut rng);
        let u = rng.random_range(0..6);
        table[g.mul(shift(v), u) * 6 + v] += 1.0;
    }
    let rows: Vec<f64> = (0..6).map(|b| (0..6).map(|v| table[b * 6 + v]).sum()).collect();
    let cols: Vec<f64> = (0..6).map(|v| (0..6).map(|b| table[b * 6 + v]).sum()).collect();
    let n = draws as f64;
    let stat: f64 = (0..36)
        .map(|i| {
            let e = rows[i / 6] * cols[i % 6] / n;
            (table[i] - e).powi(2) / e
        })
        .sum();
    let p = 1.0 - ChiSquared::new(25.0).unwrap().cdf(stat);
    assert!(p > 1e-3, "chi-square {stat}, p = {p}");
}
