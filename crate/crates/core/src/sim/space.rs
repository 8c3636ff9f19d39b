use std::sync::Arc;

use rand::distr::Distribution;
use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;

use crate::error::{Error, Result};
use crate::function::{CircleFunction, TestFunction};
use crate::group::{reduce, Element, FiniteGroup};
use crate::measure::{CircleMeasure, CircleSampler, FiniteMeasure};
use crate::scalar::Scalar;

/// Arcs used as the default cell partition of the circle.
pub const DEFAULT_CIRCLE_CELLS: usize = 64;

/// A group, an increment law and a test function, as seen by the simulator.
pub trait WalkSpace: Sync {
    type Point: Copy + Send;

    fn identity(&self) -> Self::Point;
    fn haar<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Point;
    /// Draws `X ~ ν` and returns `x·X`.
    fn step<R: Rng + ?Sized>(&self, x: Self::Point, rng: &mut R) -> Self::Point;
    fn f(&self, x: Self::Point) -> f64;
    fn cell(&self, x: Self::Point) -> usize;
    fn cell_count(&self) -> usize;
}

/// Increment sampler for a measure on a finite group (alias method).
#[derive(Debug, Clone)]
pub struct IncrementSampler {
    support: Vec<Element>,
    alias: Option<WeightedAliasIndex<f64>>,
}

impl IncrementSampler {
    pub fn new<T: Scalar>(nu: &FiniteMeasure<T>) -> Result<Self> {
        let support = nu.support();
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        if nu.weights().iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure("increment law has negative weights".into()));
        }
        let alias = if support.len() == 1 {
            None
        } else {
            let w = support.iter().map(|&x| nu.weight(x).as_f64()).collect();
            Some(WeightedAliasIndex::new(w).map_err(|e| Error::InvalidMeasure(e.to_string()))?)
        };
        Ok(IncrementSampler { support, alias })
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        match &self.alias {
            None => self.support[0],
            Some(a) => self.support[a.sample(rng)],
        }
    }
}

pub fn sample_increment<R: Rng + ?Sized>(sampler: &IncrementSampler, rng: &mut R) -> Element {
    sampler.sample(rng)
}

/// A walk on a finite group.
#[derive(Debug, Clone)]
pub struct FiniteSpace {
    group: Arc<FiniteGroup>,
    increments: IncrementSampler,
    f: Vec<f64>,
    cells: Vec<usize>,
    cell_count: usize,
}

impl FiniteSpace {
    /// Singleton cells.
    pub fn new<T: Scalar>(nu: &FiniteMeasure<T>, f: &TestFunction) -> Result<Self> {
        let n = nu.group().order();
        Self::with_cells(nu, f, (0..n).collect())
    }

    /// `cells[x]` is the cell index of element `x`; cells must be `0..k` with none empty.
    pub fn with_cells<T: Scalar>(nu: &FiniteMeasure<T>, f: &TestFunction, cells: Vec<usize>) -> Result<Self> {
        if !crate::measure::same_group(nu.group(), f.group()) {
            return Err(Error::GroupMismatch);
        }
        if cells.len() != nu.group().order() {
            return Err(Error::InvalidMeasure("cell map must cover every element".into()));
        }
        let cell_count = cells.iter().max().map_or(0, |m| m + 1);
        let mut seen = vec![false; cell_count];
        for &c in &cells {
            seen[c] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidMeasure("cell indices must be contiguous".into()));
        }
        Ok(FiniteSpace {
            group: nu.group().clone(),
            increments: IncrementSampler::new(nu)?,
            f: f.values().to_vec(),
            cells,
            cell_count,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
}

impl WalkSpace for FiniteSpace {
    type Point = Element;

    fn identity(&self) -> Element {
        self.group.identity()
    }

    fn haar<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        self.group.haar_sample(rng)
    }

    #[inline]
    fn step<R: Rng + ?Sized>(&self, x: Element, rng: &mut R) -> Element {
        self.group.mul(x, self.increments.sample(rng))
    }

    #[inline]
    fn f(&self, x: Element) -> f64 {
        self.f[x]
    }

    #[inline]
    fn cell(&self, x: Element) -> usize {
        self.cells[x]
    }

    fn cell_count(&self) -> usize {
        self.cell_count
    }
}

/// A walk on the circle with equal-arc cells.
#[derive(Debug, Clone)]
pub struct CircleSpace {
    sampler: CircleSampler,
    f: CircleFunction,
    cell_count: usize,
}

impl CircleSpace {
    pub fn new(nu: &CircleMeasure, f: &CircleFunction, cell_count: usize) -> Result<Self> {
        if cell_count == 0 {
            return Err(Error::InvalidMeasure("need at least one cell".into()));
        }
        Ok(CircleSpace { sampler: nu.sampler()?, f: f.clone(), cell_count })
    }
}

impl WalkSpace for CircleSpace {
    type Point = f64;

    fn identity(&self) -> f64 {
        0.0
    }

    fn haar<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random::<f64>()
    }

    #[inline]
    fn step<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> f64 {
        reduce(x + self.sampler.sample(rng))
    }

    #[inline]
    fn f(&self, x: f64) -> f64 {
        self.f.value(x)
    }

    #[inline]
    fn cell(&self, x: f64) -> usize {
        ((x * self.cell_count as f64) as usize).min(self.cell_count - 1)
    }

    fn cell_count(&self) -> usize {
        self.cell_count
    }
}
