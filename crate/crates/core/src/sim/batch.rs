use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::space::WalkSpace;
use crate::error::{Error, Result};

/// Default cap on `replicas × N`.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

/// Per-replica generator: the seed keys the ChaCha8 key, the replica index its stream.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkConfig {
    /// Horizon `N`.
    pub horizon: u64,
    pub replicas: usize,
    pub seed: u64,
    /// Sorted, within `1..=N`; the horizon is always recorded.
    pub checkpoints: Vec<u64>,
    /// Start at a Haar-uniform `U` so every visited point is uniform.
    pub stationary_start: bool,
    pub record_counts: bool,
    /// Track `max_{lo≤n≤N} |Σ_{k≤n} f(S_k)| / √(n log log n)` with `lo = N/10`.
    pub track_lil: bool,
    pub budget: u64,
}

impl WalkConfig {
    pub fn new(horizon: u64, replicas: usize, seed: u64) -> Self {
        WalkConfig {
            horizon,
            replicas,
            seed,
            checkpoints: vec![horizon],
            stationary_start: false,
            record_counts: true,
            track_lil: false,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_checkpoints(mut self, checkpoints: impl IntoIterator<Item = u64>) -> Self {
        self.checkpoints = checkpoints.into_iter().collect();
        self
    }

    pub fn stationary(mut self, on: bool) -> Self {
        self.stationary_start = on;
        self
    }

    pub fn with_lil(mut self, on: bool) -> Self {
        self.track_lil = on;
        self
    }

    pub fn with_counts(mut self, on: bool) -> Self {
        self.record_counts = on;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Sorts, dedups, appends the horizon and checks the ranges and the budget.
    pub fn validated(&self) -> Result<WalkConfig> {
        if self.horizon == 0 || self.replicas == 0 {
            return Err(Error::Domain("horizon and replicas must be positive".into()));
        }
        let mut cfg = self.clone();
        cfg.checkpoints.push(cfg.horizon);
        cfg.checkpoints.sort_unstable();
        cfg.checkpoints.dedup();
        if cfg.checkpoints[0] == 0 || *cfg.checkpoints.last().unwrap() > cfg.horizon {
            return Err(Error::Domain(format!("checkpoints must lie in 1..={}", cfg.horizon)));
        }
        let needed = (cfg.replicas as u64).saturating_mul(cfg.horizon);
        if needed > cfg.budget {
            return Err(Error::Budget { needed, budget: cfg.budget });
        }
        Ok(cfg)
    }

    /// First index where the running LIL maximum is tracked.
    pub fn lil_start(&self) -> u64 {
        (self.horizon / 10).max(16)
    }
}

/// Partial sums at checkpoints and cell visit counts for every replica.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryBatch {
    pub horizon: u64,
    pub replicas: usize,
    pub seed: u64,
    pub checkpoints: Vec<u64>,
    pub stationary_start: bool,
    /// Row-major `replicas × checkpoints`.
    pub sums: Vec<f64>,
    /// Row-major `replicas × cells`; empty unless counts were recorded.
    pub counts: Vec<u64>,
    pub cell_count: usize,
    /// Cell of `S_N` per replica.
    pub terminal_cells: Vec<usize>,
    /// Per-replica running LIL maximum, when tracked.
    pub lil_max: Option<Vec<f64>>,
    /// Stream id per replica.
    pub streams: Vec<u64>,
}

impl TrajectoryBatch {
    pub fn sum(&self, replica: usize, checkpoint: usize) -> f64 {
        self.sums[replica * self.checkpoints.len() + checkpoint]
    }

    /// All replicas' sums at one checkpoint index.
    pub fn column(&self, checkpoint: usize) -> Vec<f64> {
        (0..self.replicas).map(|r| self.sum(r, checkpoint)).collect()
    }

    pub fn final_sums(&self) -> Vec<f64> {
        self.column(self.checkpoints.len() - 1)
    }

    pub fn counts_of(&self, replica: usize) -> &[u64] {
        &self.counts[replica * self.cell_count..(replica + 1) * self.cell_count]
    }

    /// Visit counts summed over replicas.
    pub fn total_counts(&self) -> Vec<u64> {
        let mut out = vec![0; self.cell_count];
        for r in 0..self.replicas {
            for (o, c) in out.iter_mut().zip(self.counts_of(r)) {
                *o += c;
            }
        }
        out
    }

    pub fn checkpoint_index(&self, n: u64) -> Option<usize> {
        self.checkpoints.iter().position(|&c| c == n)
    }
}

struct ReplicaOut {
    sums: Vec<f64>,
    counts: Vec<u64>,
    terminal: usize,
    lil: f64,
}

fn run_replica<S: WalkSpace>(space: &S, cfg: &WalkConfig, lil_weights: &[f64], replica: u64) -> ReplicaOut {
    let mut rng = replica_rng(cfg.seed, replica);
    let mut x = if cfg.stationary_start { space.haar(&mut rng) } else { space.identity() };
    let mut sums = Vec::with_capacity(cfg.checkpoints.len());
    let mut counts = if cfg.record_counts { vec![0u64; space.cell_count()] } else { Vec::new() };
    let lil_start = cfg.lil_start();
    let mut lil = 0.0f64;
    let mut next = 0;
    let mut acc = 0.0;
    for k in 1..=cfg.horizon {
        x = space.step(x, &mut rng);
        acc += space.f(x);
        if cfg.record_counts {
            counts[space.cell(x)] += 1;
        }
        if cfg.track_lil && k >= lil_start {
            lil = lil.max(acc.abs() * lil_weights[(k - lil_start) as usize]);
        }
        if cfg.checkpoints[next] == k {
            sums.push(acc);
            next += 1;
            if next == cfg.checkpoints.len() {
                break;
            }
        }
    }
    ReplicaOut { sums, counts, terminal: space.cell(x), lil }
}

/// Runs every replica in parallel and merges the results in replica order.
pub fn run_batch<S: WalkSpace>(space: &S, cfg: &WalkConfig) -> Result<TrajectoryBatch> {
    let cfg = cfg.validated()?;
    let lil_weights: Vec<f64> = if cfg.track_lil {
        (cfg.lil_start()..=cfg.horizon).map(|n| 1.0 / ((n as f64) * (n as f64).ln().ln()).sqrt()).collect()
    } else {
        Vec::new()
    };
    let outs: Vec<ReplicaOut> = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| run_replica(space, &cfg, &lil_weights, r))
        .collect();
    let mut sums = Vec::with_capacity(cfg.replicas * cfg.checkpoints.len());
    let mut counts = Vec::with_capacity(if cfg.record_counts { cfg.replicas * space.cell_count() } else { 0 });
    let mut terminal_cells = Vec::with_capacity(cfg.replicas);
    let mut lil = Vec::with_capacity(cfg.replicas);
    for o in outs {
        sums.extend(o.sums);
        counts.extend(o.counts);
        terminal_cells.push(o.terminal);
        lil.push(o.lil);
    }
    Ok(TrajectoryBatch {
        horizon: cfg.horizon,
        replicas: cfg.replicas,
        seed: cfg.seed,
        checkpoints: cfg.checkpoints.clone(),
        stationary_start: cfg.stationary_start,
        sums,
        counts,
        cell_count: if cfg.record_counts { space.cell_count() } else { 0 },
        terminal_cells,
        lil_max: cfg.track_lil.then_some(lil),
        streams: (0..cfg.replicas as u64).collect(),
    })
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub replicas: usize,
}

impl MomentEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        MomentEstimate { mean, std_error: (var / n).sqrt(), replicas: xs.len() }
    }
}

/// `E|Σ_{k=M+1}^{M+N} f(S_k)|^p` by Monte Carlo.
pub fn shifted_moment_estimate<S: WalkSpace>(space: &S, cfg: &WalkConfig, offset: u64, n: u64, p: u32) -> Result<MomentEstimate> {
    if !(1..=4).contains(&p) {
        return Err(Error::Domain(format!("p = {p} outside 1..=4")));
    }
    let horizon = offset + n;
    let run = WalkConfig { horizon, checkpoints: if offset > 0 { vec![offset, horizon] } else { vec![horizon] }, record_counts: false, track_lil: false, ..cfg.clone() };
    let batch = run_batch(space, &run)?;
    let last = batch.checkpoints.len() - 1;
    let samples: Vec<f64> = (0..batch.replicas)
        .map(|r| {
            let before = if offset > 0 { batch.sum(r, 0) } else { 0.0 };
            (batch.sum(r, last) - before).abs().powi(p as i32)
        })
        .collect();
    Ok(MomentEstimate::from_samples(&samples))
}

/// `E|Σ_{k≤c} f(S_k)|^p` at every checkpoint of a batch.
pub fn checkpoint_moments(batch: &TrajectoryBatch, p: f64) -> Vec<(u64, MomentEstimate)> {
    batch
        .checkpoints
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let xs: Vec<f64> = batch.column(i).iter().map(|s| s.abs().powf(p)).collect();
            (c, MomentEstimate::from_samples(&xs))
        })
        .collect()
}
