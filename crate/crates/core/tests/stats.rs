use std::sync::Arc;

use haar_walk::group::{cyclic, symmetric};
use haar_walk::sim::{checkpoint_moments, run_batch, FiniteSpace, MomentEstimate, WalkConfig};
use haar_walk::spectral::Interval;
use haar_walk::stats::{
    clt_verdict, ks_statistic, lil_verdict, moment_growth_verdict, normal_cdf, phi_normalized_trace, slln_verdict, Law,
    SLLN_CAP,
};
use haar_walk::{Error, FiniteGroup, Measure, TestFunction};

fn z2() -> Arc<FiniteGroup> {
    Arc::new(cyclic(2).unwrap())
}

fn pm1() -> TestFunction {
    TestFunction::new(z2(), vec![1.0, -1.0]).unwrap()
}

fn decades(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = 10u64;
    while c <= n {
        out.push(c);
        out.push(c * 3);
        c *= 10;
    }
    out.retain(|&c| c <= n);
    out
}

#[test]
fn ks_matches_known_values() {
    assert!((ks_statistic(&[0.0], normal_cdf) - 0.5).abs() < 1e-15);
    let xs: Vec<f64> = (1..=999).map(|i| i as f64 / 1000.0).collect();
    assert!(ks_statistic(&xs, |x| x) <= 1.0 / 999.0 + 1e-12);
}

#[test]
fn slln_on_haar_coin_flips() {
    let space = FiniteSpace::new(&Measure::uniform(z2()), &pm1()).unwrap();
    let cfg = WalkConfig::new(100_000, 200, 1).with_checkpoints(decades(100_000)).with_counts(false);
    let batch = run_batch(&space, &cfg).unwrap();
    let v = slln_verdict(&batch, 2.0, 1, 1.0, SLLN_CAP).unwrap();
    assert_eq!(v.law, Law::Slln);
    assert!(v.pass, "{v:?}");
    let trace = phi_normalized_trace(&batch, 2.0, 1, 1.0).unwrap();
    assert!(trace.last().unwrap().value < trace[0].value);
}

#[test]
fn slln_zero_function_and_errors() {
    let f = TestFunction::zero(z2());
    let space = FiniteSpace::new(&Measure::uniform(z2()), &f).unwrap();
    let batch = run_batch(&space, &WalkConfig::new(10_000, 10, 1).with_checkpoints(decades(10_000))).unwrap();
    let v = slln_verdict(&batch, 1.0, 1, 1.0, SLLN_CAP).unwrap();
    assert_eq!(v.statistic, 0.0);
    assert!(v.pass);
    assert!(phi_normalized_trace(&batch, 1.5, 1, 0.5).unwrap().iter().all(|t| t.value == 0.0));
    let short = run_batch(&space, &WalkConfig::new(10_000, 10, 1)).unwrap();
    assert!(matches!(slln_verdict(&short, 1.0, 1, 1.0, SLLN_CAP), Err(Error::Insufficient(_))));
}

#[test]
fn slln_fails_for_non_adapted_walk() {
    let g = Arc::new(symmetric(3).unwrap());
    let t = g.element_by_name("(1 2)").unwrap();
    let f = TestFunction::centered_indicator(g.clone(), &[g.identity(), t]).unwrap();
    let space = FiniteSpace::new(&Measure::delta(g, t).unwrap(), &f).unwrap();
    let batch = run_batch(&space, &WalkConfig::new(100_000, 4, 1).with_checkpoints(decades(100_000))).unwrap();
    let v = slln_verdict(&batch, 2.0, 1, 1.0, SLLN_CAP).unwrap();
    assert!(!v.pass);
    let mean = batch.final_sums()[0] / 100_000.0;
    assert!((mean - 2.0 / 3.0).abs() < 1e-4);
    // The identity walk grows exactly when f(e) ≠ 0.
    let ge = Arc::new(cyclic(3).unwrap());
    let h = TestFunction::new(ge.clone(), vec![2.0, -1.0, -1.0]).unwrap();
    let space = FiniteSpace::new(&Measure::delta(ge, 0).unwrap(), &h).unwrap();
    let batch = run_batch(&space, &WalkConfig::new(10_000, 1, 0).with_checkpoints(decades(10_000))).unwrap();
    let trace = phi_normalized_trace(&batch, 2.0, 1, 1.0).unwrap();
    assert!(trace.last().unwrap().value > trace[0].value);
    assert!(!slln_verdict(&batch, 2.0, 1, 1.0, SLLN_CAP).unwrap().pass);
    let silent = TestFunction::new(h.group().clone(), vec![0.0, 1.0, -1.0]).unwrap();
    let space = FiniteSpace::new(&Measure::delta(h.group().clone(), 0).unwrap(), &silent).unwrap();
    let batch = run_batch(&space, &WalkConfig::new(10_000, 1, 0).with_checkpoints(decades(10_000))).unwrap();
    assert!(phi_normalized_trace(&batch, 2.0, 1, 1.0).unwrap().iter().all(|t| t.value == 0.0));
}

#[test]
fn clt_on_haar_coin_flips() {
    let space = FiniteSpace::new(&Measure::uniform(z2()), &pm1()).unwrap();
    let cfg = WalkConfig::new(10_000, 10_000, 5).with_checkpoints([100, 1000]).with_counts(false);
    let batch = run_batch(&space, &cfg).unwrap();
    let v = clt_verdict(&batch, 1.0, 1e-12, 1.0, Some(Interval::point(1.0))).unwrap();
    assert!(v.pass, "{v:?}");
    assert!(v.statistic <= 0.02);
    assert!(!v.degenerate);
}

#[test]
fn clt_wrong_constant_fails() {
    let space = FiniteSpace::new(&Measure::uniform(z2()), &pm1()).unwrap();
    let cfg = WalkConfig::new(10_000, 10_000, 5).with_checkpoints([100, 1000]).with_counts(false);
    let batch = run_batch(&space, &cfg).unwrap();
    assert!(!clt_verdict(&batch, 0.25, 1e-12, 1.0, Some(Interval::point(1.0))).unwrap().pass);
    let small = run_batch(&space, &WalkConfig::new(100, 10, 5)).unwrap();
    assert!(matches!(clt_verdict(&small, 1.0, 1e-12, 1.0, None), Err(Error::Insufficient(_))));
}

#[test]
fn clt_degenerate_branch_for_periodic_walk() {
    let space = FiniteSpace::new(&Measure::delta(z2(), 1).unwrap(), &pm1()).unwrap();
    let batch = run_batch(&space, &WalkConfig::new(10_000, 1000, 1).with_checkpoints(decades(10_000))).unwrap();
    assert!(batch.sums.iter().all(|s| s.abs() <= 1.0));
    let v = clt_verdict(&batch, 0.0, 1e-12, 1.0, None).unwrap();
    assert!(v.degenerate && v.pass, "{v:?}");
}

#[test]
fn lil_zero_function_is_degenerate() {
    let f = TestFunction::zero(z2());
    let space = FiniteSpace::new(&Measure::uniform(z2()), &f).unwrap();
    let batch = run_batch(&space, &WalkConfig::new(100_000, 10, 1).with_lil(true)).unwrap();
    let v = lil_verdict(&batch, Some(0.0), 1e-12).unwrap();
    assert!(v.degenerate && v.pass);
    let finite = lil_verdict(&batch, None, 1e-12).unwrap();
    assert!(finite.pass && finite.statistic == 0.0);
    let untracked = run_batch(&space, &WalkConfig::new(1000, 10, 1)).unwrap();
    assert!(lil_verdict(&untracked, Some(1.0), 1e-12).is_err());
}

#[test]
fn lil_rejects_wrong_constant() {
    let space = FiniteSpace::new(&Measure::uniform(z2()), &pm1()).unwrap();
    let batch = run_batch(&space, &WalkConfig::new(100_000, 200, 3).with_lil(true).with_counts(false)).unwrap();
    let right = lil_verdict(&batch, Some(1.0), 1e-12).unwrap();
    let wrong = lil_verdict(&batch, Some(4.0), 1e-12).unwrap();
    assert!(right.pass, "{right:?}");
    assert!(!wrong.pass);
}

#[test]
fn moment_growth_slopes() {
    let space = FiniteSpace::new(&Measure::uniform(z2()), &pm1()).unwrap();
    let cfg = WalkConfig::new(10_000, 4000, 9).with_checkpoints([100, 316, 1000, 3162]).stationary(true).with_counts(false);
    let batch = run_batch(&space, &cfg).unwrap();
    let m4 = checkpoint_moments(&batch, 4.0);
    let v = moment_growth_verdict(&m4, 4).unwrap();
    assert!(v.pass && (v.statistic - 0.5).abs() < 0.05, "{v:?}");
    let (_, last) = m4.last().unwrap();
    assert!((last.mean / (3.0 * 1e8) - 1.0).abs() < 0.1);

    let zero = vec![(100, MomentEstimate { mean: 0.0, std_error: 0.0, replicas: 1 }); 4];
    let flat = moment_growth_verdict(&zero, 1).unwrap();
    assert!(flat.pass && flat.statistic == 0.0);
    assert!(moment_growth_verdict(&zero[..3], 1).is_err());

    let linear: Vec<(u64, MomentEstimate)> =
        [100u64, 1000, 10_000, 100_000].iter().map(|&n| (n, MomentEstimate { mean: (n * n) as f64, std_error: 0.0, replicas: 1 })).collect();
    assert!(!moment_growth_verdict(&linear, 2).unwrap().pass);
}
