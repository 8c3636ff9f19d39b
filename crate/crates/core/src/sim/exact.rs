use crate::error::{Error, Result};
use crate::function::TestFunction;
use crate::measure::FiniteMeasure;
use crate::scalar::Scalar;

/// Exact `E(Σ_{k=1}^N f(S_k))²` for the walk started at the identity,
/// `O(N n²)`: `Σ_j E f(S_j)² + 2 Σ_{j<k} Σ_x ν^{*j}(x) f(x) Σ_y ν^{*(k−j)}(y) f(xy)`.
pub fn second_moment_from_identity<T: Scalar>(f: &TestFunction, nu: &FiniteMeasure<T>, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let g = nu.group();
    let order = g.order();
    let nu = nu.to_f64();
    let v = f.values();
    let mut powers: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    powers.push({
        let mut e = vec![0.0; order];
        e[g.identity()] = 1.0;
        e
    });
    for j in 1..=n {
        let prev = FiniteMeasure::signed(g.clone(), powers[j - 1].clone())?;
        powers.push(prev.convolve(&nu)?.weights().to_vec());
    }
    // cum[x] accumulates Σ_{d=1}^{D} f(x)·Σ_y ν^{*d}(y) f(xy).
    let mut cum = vec![vec![0.0; order]; n];
    let mut running = vec![0.0; order];
    for d in 1..n {
        for (x, r) in running.iter_mut().enumerate() {
            let h: f64 = powers[d].iter().enumerate().filter(|(_, &w)| w != 0.0).map(|(y, &w)| w * v[g.mul(x, y)]).sum();
            *r += v[x] * h;
        }
        cum[d] = running.clone();
    }
    let mut total = 0.0;
    for j in 1..=n {
        let p = &powers[j];
        total += p.iter().zip(v).map(|(w, fx)| w * fx * fx).sum::<f64>();
        if j < n {
            total += 2.0 * p.iter().zip(&cum[n - j]).map(|(w, c)| w * c).sum::<f64>();
        }
    }
    Ok(total)
}
