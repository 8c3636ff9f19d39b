use statrs::function::erf::erfc;

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// One-sample Kolmogorov–Smirnov distance `sup_x |F_n(x) − F(x)|`.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let plus = (i + 1) as f64 / n - f;
        let minus = f - i as f64 / n;
        d = d.max(plus).max(minus);
    }
    d
}

/// Asymptotic 95% one-sample KS critical value `1.36/√n`.
pub fn ks_noise_floor(n: usize) -> f64 {
    1.36 / (n as f64).sqrt()
}
