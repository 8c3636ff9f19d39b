use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::function::{circular_variation, piece_index, piecewise_fourier, validate_grid, GRID_EPS};
use crate::group::reduce;

use super::finite::MASS_TOL;

/// Largest number of density breakpoints any circle measure may carry.
pub const MAX_BREAKPOINTS: usize = 1 << 16;

/// Largest number of distinct atoms any circle measure may carry.
pub const MAX_ATOMS: usize = 1 << 16;

/// Atoms closer than this (mod 1) are merged.
pub const ATOM_MERGE_TOL: f64 = 1e-12;

/// Denominator cap for recognising a float location as rational.
pub const RATIONAL_DENOMINATOR_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// A piecewise-constant function on ℝ/ℤ with breakpoints starting at 0.
/// An empty breakpoint list is the zero function.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Density {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl Density {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        validate_grid(&breaks, values.len()).map_err(Error::InvalidMeasure)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite density value".into()));
        }
        if breaks.len() > MAX_BREAKPOINTS {
            return Err(Error::BreakpointCap { needed: breaks.len(), cap: MAX_BREAKPOINTS });
        }
        Ok(Density { breaks, values }.merged())
    }

    pub fn zero() -> Self {
        Density::default()
    }

    pub fn constant(c: f64) -> Self {
        Density { breaks: vec![0.0], values: vec![c] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(start, end, value)` for every piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breaks
            .iter()
            .enumerate()
            .map(move |(i, &a)| (a, self.breaks.get(i + 1).copied().unwrap_or(1.0), self.values[i]))
    }

    pub fn value(&self, x: f64) -> f64 {
        if self.breaks.is_empty() {
            return 0.0;
        }
        self.values[piece_index(&self.breaks, reduce(x))]
    }

    pub fn mass(&self) -> f64 {
        self.pieces().map(|(a, b, v)| (b - a) * v).sum()
    }

    pub fn abs_mass(&self) -> f64 {
        self.pieces().map(|(a, b, v)| (b - a) * v.abs()).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Density { breaks: self.breaks.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    /// `x ↦ self(x − t)`.
    pub fn translated(&self, t: f64) -> Self {
        if self.breaks.is_empty() {
            return self.clone();
        }
        let mut pts: Vec<(f64, f64)> = self.breaks.iter().zip(&self.values).map(|(&b, &v)| (snap(reduce(b + t)), v)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts[0].0 != 0.0 {
            let wrap = pts[pts.len() - 1].1;
            pts.insert(0, (0.0, wrap));
        }
        let (breaks, values) = pts.into_iter().unzip();
        Density { breaks, values }.merged()
    }

    /// Pointwise sum on the common refinement of both grids.
    pub fn add(&self, other: &Density) -> Density {
        if self.breaks.is_empty() {
            return other.clone();
        }
        if other.breaks.is_empty() {
            return self.clone();
        }
        let grid = refine(&self.breaks, &other.breaks);
        let values = cell_midpoints(&grid).map(|m| self.value(m) + other.value(m)).collect();
        Density { breaks: grid, values }.merged()
    }

    /// `∫ |self − other|`.
    pub fn l1_distance(&self, other: &Density) -> f64 {
        self.add(&other.scaled(-1.0)).abs_mass()
    }

    /// `∫ self(x) e^{−2πinx} dx`.
    pub fn fourier(&self, n: i64) -> Complex64 {
        if self.breaks.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        piecewise_fourier(&self.breaks, &self.values, n)
    }

    /// Total absolute jump of the periodic step function.
    pub fn jump_variation(&self) -> f64 {
        if self.breaks.is_empty() {
            0.0
        } else {
            circular_variation(&self.values)
        }
    }

    /// Merges adjacent pieces with identical values.
    fn merged(self) -> Self {
        if self.breaks.len() <= 1 {
            return self;
        }
        let mut breaks = vec![self.breaks[0]];
        let mut values = vec![self.values[0]];
        for (&b, &v) in self.breaks.iter().zip(&self.values).skip(1) {
            if v != *values.last().unwrap() {
                breaks.push(b);
                values.push(v);
            }
        }
        Density { breaks, values }
    }

    /// `self ⊛ other`: the exact piecewise-linear convolution projected back onto
    /// its kink grid by cell averages. Returns the projection and its L¹ error.
    pub fn convolve(&self, other: &Density) -> Result<(Density, f64)> {
        if self.is_zero() || other.is_zero() {
            return Ok((Density::zero(), 0.0));
        }
        // Each pair of boxes convolves to a trapezoid whose slope jumps at four points.
        let mut kinks: Vec<(f64, f64)> = Vec::with_capacity(4 * self.breaks.len() * other.breaks.len());
        for (a, ae, v) in self.pieces() {
            if v == 0.0 {
                continue;
            }
            for (b, be, w) in other.pieces() {
                if w == 0.0 {
                    continue;
                }
                let (l, m) = (ae - a, be - b);
                let s = a + b;
                let h = v * w;
                kinks.push((snap(reduce(s)), h));
                kinks.push((snap(reduce(s + l.min(m))), -h));
                kinks.push((snap(reduce(s + l.max(m))), -h));
                kinks.push((snap(reduce(s + l + m)), h));
            }
        }
        kinks.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut pos: Vec<f64> = vec![0.0];
        let mut jump: Vec<f64> = vec![0.0];
        for (p, d) in kinks {
            if p - pos.last().unwrap() <= GRID_EPS {
                *jump.last_mut().unwrap() += d;
            } else {
                pos.push(p);
                jump.push(d);
            }
        }
        if pos.len() > MAX_BREAKPOINTS {
            return Err(Error::BreakpointCap { needed: pos.len(), cap: MAX_BREAKPOINTS });
        }
        let k = pos.len();
        let len = |i: usize| pos.get(i + 1).copied().unwrap_or(1.0) - pos[i];
        // Periodicity pins both constants: ∫ slope = 0 and ∫ h = mass product.
        let mut slope = vec![0.0; k];
        let mut acc = 0.0;
        for i in 0..k {
            acc += jump[i];
            slope[i] = acc;
        }
        let shift = -(0..k).map(|i| slope[i] * len(i)).sum::<f64>();
        for s in slope.iter_mut() {
            *s += shift;
        }
        let mut rel = vec![0.0; k + 1];
        let mut integral = 0.0;
        for i in 0..k {
            rel[i + 1] = rel[i] + slope[i] * len(i);
            integral += len(i) * (rel[i] + rel[i + 1]) / 2.0;
        }
        let h0 = self.mass() * other.mass() - integral;
        let mut values = Vec::with_capacity(k);
        let mut error = 0.0;
        for i in 0..k {
            let (hl, hr) = (h0 + rel[i], h0 + rel[i + 1]);
            values.push((hl + hr) / 2.0);
            error += (hr - hl).abs() * len(i) / 4.0;
        }
        Ok((Density { breaks: pos, values }.merged(), error))
    }

    fn clamp_nonnegative(self) -> Self {
        let values = self.values.iter().map(|&v| v.max(0.0)).collect();
        Density { breaks: self.breaks, values }.merged()
    }
}

fn snap(x: f64) -> f64 {
    if x >= 1.0 - GRID_EPS {
        0.0
    } else {
        x
    }
}

fn refine(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = a.iter().chain(b).copied().collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|x, y| (*x - *y).abs() <= GRID_EPS);
    grid
}

fn cell_midpoints(grid: &[f64]) -> impl Iterator<Item = f64> + '_ {
    grid.iter().enumerate().map(move |(i, &a)| 0.5 * (a + grid.get(i + 1).copied().unwrap_or(1.0)))
}

/// A probability measure on ℝ/ℤ: finitely many atoms plus a piecewise-constant density.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleMeasure {
    atoms: Vec<Atom>,
    density: Density,
    projection_error: f64,
}

impl CircleMeasure {
    pub fn new(atoms: Vec<Atom>, density: Density) -> Result<Self> {
        if atoms.iter().any(|a| !a.location.is_finite() || !(a.mass >= 0.0)) {
            return Err(Error::InvalidMeasure("atoms need finite locations and nonnegative masses".into()));
        }
        if density.values.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidMeasure("negative density".into()));
        }
        let m = CircleMeasure { atoms: merge_atoms(atoms), density, projection_error: 0.0 };
        if (m.total_mass() - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {} is not 1", m.total_mass())));
        }
        Ok(m)
    }

    /// Lebesgue measure on the circle.
    pub fn haar() -> Self {
        CircleMeasure { atoms: Vec::new(), density: Density::constant(1.0), projection_error: 0.0 }
    }

    pub fn dirac(x: f64) -> Self {
        CircleMeasure { atoms: vec![Atom { location: reduce(x), mass: 1.0 }], density: Density::zero(), projection_error: 0.0 }
    }

    /// Uniform on the arc `[a, a + len)`.
    pub fn arc(a: f64, len: f64) -> Result<Self> {
        if !(len > 0.0 && len <= 1.0) {
            return Err(Error::InvalidMeasure("arc length must lie in (0, 1]".into()));
        }
        let d = Density::new(vec![0.0, len], vec![1.0 / len, 0.0])?.translated(a);
        let d = if len == 1.0 { Density::constant(1.0) } else { d };
        Self::new(Vec::new(), d)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    /// Accumulated L¹ error from projecting convolutions back onto step densities.
    pub fn projection_error(&self) -> f64 {
        self.projection_error
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_mass() + self.density.mass()
    }

    /// `(abs part, singular part)`: the density and the atoms.
    pub fn lebesgue_decompose(&self) -> (Density, Vec<Atom>) {
        (self.density.clone(), self.atoms.clone())
    }

    /// `ν̂(n) = Σ a_i e^{−2πinx_i} + ∫ d(x) e^{−2πinx} dx`.
    pub fn fourier(&self, n: i64) -> Complex64 {
        let atoms: Complex64 = self
            .atoms
            .iter()
            .map(|a| a.mass * Complex64::from_polar(1.0, -2.0 * PI * n as f64 * a.location))
            .sum();
        atoms + self.density.fourier(n)
    }

    /// Convolution, exact except for density ⊛ density, whose projection error is tracked.
    pub fn convolve(&self, other: &CircleMeasure) -> Result<CircleMeasure> {
        let mut atoms = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for a in &self.atoms {
            for b in &other.atoms {
                atoms.push(Atom { location: reduce(a.location + b.location), mass: a.mass * b.mass });
            }
        }
        let atoms = merge_atoms(atoms);
        if atoms.len() > MAX_ATOMS {
            return Err(Error::BreakpointCap { needed: atoms.len(), cap: MAX_ATOMS });
        }
        let mut density = Density::zero();
        for a in &self.atoms {
            density = density.add(&other.density.translated(a.location).scaled(a.mass));
        }
        for b in &other.atoms {
            density = density.add(&self.density.translated(b.location).scaled(b.mass));
        }
        let (dd, err) = self.density.convolve(&other.density)?;
        density = density.add(&dd).clamp_nonnegative();
        if density.breaks.len() > MAX_BREAKPOINTS {
            return Err(Error::BreakpointCap { needed: density.breaks.len(), cap: MAX_BREAKPOINTS });
        }
        Ok(CircleMeasure {
            atoms,
            density,
            projection_error: self.projection_error + other.projection_error + err,
        })
    }

    /// `ν^{*k}` by binary powering.
    pub fn power(&self, k: u64) -> Result<CircleMeasure> {
        if k == 0 {
            return Err(Error::Domain("convolution power needs k >= 1".into()));
        }
        let mut result: Option<CircleMeasure> = None;
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

    /// `‖self − other‖_TV = Σ|atom mass differences| + ∫|density difference|`.
    pub fn tv_distance(&self, other: &CircleMeasure) -> f64 {
        let mut atoms: Vec<Atom> = self.atoms.clone();
        atoms.extend(other.atoms.iter().map(|a| Atom { location: a.location, mass: -a.mass }));
        let atoms = merge_atoms(atoms);
        atoms.iter().map(|a| a.mass.abs()).sum::<f64>() + self.density.l1_distance(&other.density)
    }

    /// Adapted iff there is density mass or some atom sits at an irrational point
    /// (a float is rational when a continued fraction with denominator at most
    /// [`RATIONAL_DENOMINATOR_CAP`] matches it to 1e-12).
    pub fn is_adapted(&self) -> bool {
        self.density.mass() > 0.0 || self.atoms.iter().any(|a| a.mass > 0.0 && rational_approx(a.location).is_none())
    }

    /// Strictly aperiodic iff there is density mass or two atoms differ by an irrational.
    pub fn is_strictly_aperiodic(&self) -> bool {
        if self.density.mass() > 0.0 {
            return true;
        }
        let support: Vec<f64> = self.atoms.iter().filter(|a| a.mass > 0.0).map(|a| a.location).collect();
        support.iter().skip(1).any(|&x| rational_approx(reduce(x - support[0])).is_none())
    }

    pub fn has_abs_component(&self) -> bool {
        self.density.mass() > 0.0
    }

    /// Draws from the measure: atom-vs-density branch, then a piecewise inverse CDF.
    pub fn sampler(&self) -> Result<CircleSampler> {
        let mut cum = Vec::with_capacity(self.atoms.len() + self.density.breaks.len());
        let mut outcomes = Vec::with_capacity(cum.capacity());
        let mut acc = 0.0;
        for a in &self.atoms {
            if a.mass > 0.0 {
                acc += a.mass;
                cum.push(acc);
                outcomes.push(Outcome::Atom(a.location));
            }
        }
        for (a, b, v) in self.density.pieces() {
            if v > 0.0 {
                acc += (b - a) * v;
                cum.push(acc);
                outcomes.push(Outcome::Piece(a, b));
            }
        }
        if outcomes.is_empty() {
            return Err(Error::EmptySupport);
        }
        Ok(CircleSampler { cum, outcomes, total: acc })
    }
}

#[derive(Debug, Clone, Copy)]
enum Outcome {
    Atom(f64),
    Piece(f64, f64),
}

#[derive(Debug, Clone)]
pub struct CircleSampler {
    cum: Vec<f64>,
    outcomes: Vec<Outcome>,
    total: f64,
}

impl CircleSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = rng.random::<f64>() * self.total;
        let i = self.cum.partition_point(|&c| c <= u).min(self.cum.len() - 1);
        match self.outcomes[i] {
            Outcome::Atom(x) => x,
            Outcome::Piece(a, b) => {
                let lo = if i == 0 { 0.0 } else { self.cum[i - 1] };
                let frac = ((u - lo) / (self.cum[i] - lo)).clamp(0.0, 1.0);
                reduce(a + frac * (b - a))
            }
        }
    }
}

fn merge_atoms(mut atoms: Vec<Atom>) -> Vec<Atom> {
    for a in atoms.iter_mut() {
        a.location = snap(reduce(a.location));
    }
    atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if a.location - last.location <= ATOM_MERGE_TOL => last.mass += a.mass,
            _ => out.push(a),
        }
    }
    // Wrap-around: an atom just below 1 coincides with one at 0.
    if out.len() > 1 && 1.0 - out[out.len() - 1].location + out[0].location <= ATOM_MERGE_TOL {
        let last = out.pop().unwrap();
        out[0].mass += last.mass;
    }
    out.retain(|a| a.mass != 0.0);
    out
}

/// `(p, q)` with `|x − p/q| ≤ 1e-12` and `q ≤` [`RATIONAL_DENOMINATOR_CAP`], if any.
pub fn rational_approx(x: f64) -> Option<(i64, u64)> {
    const TOL: f64 = 1e-12;
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 as u64 > RATIONAL_DENOMINATOR_CAP {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= TOL {
            return Some((h2 as i64, k2 as u64));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}
