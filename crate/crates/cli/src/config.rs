use std::path::{Path, PathBuf};

use haar_walk::io::{load_dual, load_function, load_group, load_measure, read_toml, resolve, LoadedFunction, LoadedGroup, LoadedMeasure, SCHEMA_VERSION};
use haar_walk::repr::{CircleDual, DualSet, DEFAULT_CIRCLE_WINDOW};
use haar_walk::{Error, Result};
use serde::{Deserialize, Serialize};

/// Element in a cell list: an index or a name.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSection {
    #[serde(default = "default_horizon")]
    pub horizon: u64,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub checkpoints: Vec<u64>,
    #[serde(default)]
    pub stationary_start: bool,
    /// Finite groups: a partition of the elements. Defaults to singletons.
    pub cells: Option<Vec<Vec<ElementRef>>>,
    /// Circle: number of equal arcs.
    pub arcs: Option<usize>,
}

fn default_horizon() -> u64 {
    10_000
}

fn default_replicas() -> usize {
    1000
}

impl Default for WalkSection {
    fn default() -> Self {
        WalkSection {
            horizon: default_horizon(),
            replicas: default_replicas(),
            seed: 0,
            checkpoints: Vec::new(),
            stationary_start: false,
            cells: None,
            arcs: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SllnSettings {
    pub horizon: u64,
    pub replicas: usize,
    pub p: f64,
    pub m: u32,
    pub eps: f64,
    pub cap: f64,
}

impl Default for SllnSettings {
    fn default() -> Self {
        SllnSettings { horizon: 1_000_000, replicas: 200, p: 2.0, m: 1, eps: 1.0, cap: haar_walk::stats::SLLN_CAP }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct LilSettings {
    pub horizon: u64,
    pub replicas: usize,
}

impl Default for LilSettings {
    fn default() -> Self {
        LilSettings { horizon: 1_000_000, replicas: 200 }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct CltSettings {
    pub horizon: u64,
    pub replicas: usize,
    pub delta: f64,
    pub checkpoints: Vec<u64>,
}

impl Default for CltSettings {
    fn default() -> Self {
        CltSettings { horizon: 10_000, replicas: 10_000, delta: 1.0, checkpoints: vec![100, 1000] }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct MomentSettings {
    pub horizon: u64,
    pub replicas: usize,
    pub p: Vec<u32>,
    pub checkpoints: Vec<u64>,
}

impl Default for MomentSettings {
    fn default() -> Self {
        MomentSettings { horizon: 10_000, replicas: 4000, p: vec![1, 2, 3, 4], checkpoints: vec![100, 316, 1000, 3162] }
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub slln: SllnSettings,
    pub lil: LilSettings,
    pub clt: CltSettings,
    pub moments: MomentSettings,
}

/// A run config: one group, measure and function plus simulation settings.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub group: String,
    pub measure: String,
    pub function: String,
    pub dual: Option<String>,
    /// Circle frequency window.
    pub window: Option<usize>,
    #[serde(default)]
    pub walk: WalkSection,
    #[serde(default)]
    pub verify: VerifySection,
}

impl RunConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let cfg: RunConfig = read_toml(path)?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!("{}: unsupported schema {}", path.display(), cfg.schema)));
        }
        Ok(cfg)
    }
}

/// A fully loaded problem instance.
pub struct Instance {
    pub group_spec: String,
    pub group: LoadedGroup,
    pub measure: LoadedMeasure,
    pub function: LoadedFunction,
    pub dual_path: Option<PathBuf>,
    pub window: usize,
}

impl Instance {
    pub fn load(group: &str, measure: &str, function: &str, dual: Option<PathBuf>, window: Option<usize>, base: Option<&Path>) -> Result<Self> {
        let group_spec = match base {
            Some(_) if !group.contains(':') && !matches!(group, "quaternion8" | "Q8" | "circle") => {
                resolve(base, group).display().to_string()
            }
            _ => group.to_string(),
        };
        let loaded = load_group(&group_spec)?;
        let measure = load_measure(&loaded, measure, base)?;
        let function = load_function(&loaded, function, base)?;
        Ok(Instance { group_spec, group: loaded, measure, function, dual_path: dual, window: window.unwrap_or(DEFAULT_CIRCLE_WINDOW) })
    }

    pub fn from_config(cfg: &RunConfig, path: &Path) -> Result<Self> {
        let base = path.parent();
        let dual = cfg.dual.as_deref().map(|d| resolve(base, d));
        Self::load(&cfg.group, &cfg.measure, &cfg.function, dual, cfg.window, base)
    }

    pub fn dual(&self) -> Result<DualSet> {
        load_dual(&self.group, self.dual_path.as_deref())
    }

    pub fn circle_dual(&self) -> CircleDual {
        CircleDual::new(self.window)
    }
}
