//! TOML file formats and the inline spec grammar for groups, duals, measures
//! and test functions.
//!
//! Every file carries `schema = 1`; unknown keys are errors.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::function::{CircleFunction, TestFunction};
use crate::group::builtin::{cyclic, dihedral, quaternion8, symmetric};
use crate::group::{Element, FiniteGroup, GroupSpec};
use crate::measure::{Atom, CircleMeasure, Density, FiniteMeasure};
use crate::repr::{builtin_dual, CMatrix, DualSet, Irrep};

pub const SCHEMA_VERSION: u32 = 1;

fn check_schema(schema: u32, what: &str) -> Result<()> {
    if schema != SCHEMA_VERSION {
        return Err(Error::Parse(format!("{what}: unsupported schema {schema}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

pub fn read_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Relative paths inside a file resolve against the file's directory.
pub fn resolve(base: Option<&Path>, p: &str) -> PathBuf {
    let path = PathBuf::from(p);
    match base {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path,
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub schema: u32,
    pub name: Option<String>,
    pub order: usize,
    /// Row-major: `table[a * order + b] = ab`.
    pub table: Vec<usize>,
    pub names: Option<Vec<String>>,
}

/// One irrep: `matrices[x]` is the row-major `dim × dim` matrix of element `x`
/// as `[re, im, re, im, ...]`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepEntry {
    pub label: Option<String>,
    pub dim: usize,
    pub matrices: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualFile {
    pub schema: u32,
    pub irrep: Vec<IrrepEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomEntry {
    pub location: f64,
    pub mass: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseEntry {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub schema: u32,
    pub group: Option<String>,
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub atom: Vec<AtomEntry>,
    pub density: Option<PiecewiseEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigEntry {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub schema: u32,
    pub group: Option<String>,
    pub values: Option<Vec<f64>>,
    pub piecewise: Option<PiecewiseEntry>,
    pub trig: Option<TrigEntry>,
}

/// A resolved group: finite with its spec, or the circle.
#[derive(Debug, Clone)]
pub enum LoadedGroup {
    Finite { spec: GroupSpec, group: Arc<FiniteGroup> },
    Circle,
}

impl LoadedGroup {
    pub fn finite(&self) -> Result<&Arc<FiniteGroup>> {
        match self {
            LoadedGroup::Finite { group, .. } => Ok(group),
            LoadedGroup::Circle => Err(Error::Unsupported("operation needs a finite group".into())),
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, LoadedGroup::Circle)
    }
}

pub fn load_group_file(path: &Path) -> Result<FiniteGroup> {
    let file: GroupFile = read_toml(path)?;
    check_schema(file.schema, "group file")?;
    let name = file.name.unwrap_or_else(|| path.display().to_string());
    FiniteGroup::from_table(name, file.order, file.table, file.names)
}

pub fn build_group(spec: &GroupSpec) -> Result<LoadedGroup> {
    let group = match spec {
        GroupSpec::Cyclic(n) => cyclic(*n)?,
        GroupSpec::Dihedral(n) => dihedral(*n)?,
        GroupSpec::Symmetric(n) => symmetric(*n)?,
        GroupSpec::Quaternion8 => quaternion8()?,
        GroupSpec::Circle => return Ok(LoadedGroup::Circle),
        GroupSpec::File(p) => load_group_file(p)?,
    };
    Ok(LoadedGroup::Finite { spec: spec.clone(), group: Arc::new(group) })
}

pub fn load_group(spec: &str) -> Result<LoadedGroup> {
    build_group(&spec.parse()?)
}

pub fn load_dual_file(path: &Path, group: Arc<FiniteGroup>) -> Result<DualSet> {
    let file: DualFile = read_toml(path)?;
    check_schema(file.schema, "dual file")?;
    let n = group.order();
    let mut irreps = Vec::with_capacity(file.irrep.len());
    for (i, entry) in file.irrep.into_iter().enumerate() {
        let label = entry.label.unwrap_or_else(|| format!("irrep{i}"));
        if entry.matrices.len() != n {
            return Err(Error::InvalidDual(format!("{label}: {} matrices for {n} elements", entry.matrices.len())));
        }
        let d = entry.dim;
        let mats = entry
            .matrices
            .iter()
            .map(|m| {
                if m.len() != 2 * d * d {
                    return Err(Error::InvalidDual(format!("{label}: matrix needs {} numbers, found {}", 2 * d * d, m.len())));
                }
                Ok(CMatrix::from_row_iterator(d, d, m.chunks(2).map(|c| Complex64::new(c[0], c[1]))))
            })
            .collect::<Result<Vec<_>>>()?;
        irreps.push(Irrep::new(label, mats)?);
    }
    DualSet::new(group, irreps)
}

/// The built-in dual for built-in groups, otherwise the given dual file.
pub fn load_dual(group: &LoadedGroup, dual: Option<&Path>) -> Result<DualSet> {
    let LoadedGroup::Finite { spec, group } = group else {
        return Err(Error::Unsupported("the circle uses a frequency window, not a dual file".into()));
    };
    match dual {
        Some(path) => load_dual_file(path, group.clone()),
        None => builtin_dual(spec, group.clone()),
    }
}

/// An element by index or by name.
pub fn parse_element(group: &FiniteGroup, s: &str) -> Result<Element> {
    let s = s.trim();
    if let Some(x) = group.element_by_name(s) {
        return Ok(x);
    }
    let x: Element = s.parse().map_err(|_| Error::Parse(format!("unknown element {s:?} in {}", group.name())))?;
    group.check(x)?;
    Ok(x)
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
        .collect()
}

fn parse_elements(group: &FiniteGroup, s: &str) -> Result<Vec<Element>> {
    s.split(',').map(|t| parse_element(group, t)).collect()
}

/// A measure on a finite group or the circle.
#[derive(Debug, Clone)]
pub enum LoadedMeasure {
    Finite(FiniteMeasure<f64>),
    Circle(CircleMeasure),
}

/// Finite groups: `uniform`, `delta:x`, `support:x,y,...`, `weights:a,b,...`.
/// Circle: `uniform`, `dirac:x`, `arc:a,len`. Anything else is a measure file.
pub fn load_measure(group: &LoadedGroup, spec: &str, base: Option<&Path>) -> Result<LoadedMeasure> {
    let spec = spec.trim();
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match group {
        LoadedGroup::Finite { group, .. } => {
            let g = group.clone();
            let m = match head {
                "uniform" => FiniteMeasure::uniform(g),
                "delta" => FiniteMeasure::delta(g.clone(), parse_element(&g, rest)?)?,
                "support" => FiniteMeasure::uniform_on(g.clone(), &parse_elements(&g, rest)?)?,
                "weights" => FiniteMeasure::new(g, parse_floats(rest)?)?,
                _ => return finite_measure_file(group, &resolve(base, spec)).map(LoadedMeasure::Finite),
            };
            Ok(LoadedMeasure::Finite(m))
        }
        LoadedGroup::Circle => {
            let m = match head {
                "uniform" | "haar" => CircleMeasure::haar(),
                "dirac" => CircleMeasure::dirac(parse_floats(rest)?[0]),
                "arc" => match parse_floats(rest)?[..] {
                    [a, len] => CircleMeasure::arc(a, len)?,
                    _ => return Err(Error::Parse(format!("arc needs two numbers: {spec:?}"))),
                },
                _ => return circle_measure_file(&resolve(base, spec)).map(LoadedMeasure::Circle),
            };
            Ok(LoadedMeasure::Circle(m))
        }
    }
}

fn finite_measure_file(group: &Arc<FiniteGroup>, path: &Path) -> Result<FiniteMeasure<f64>> {
    let file: MeasureFile = read_toml(path)?;
    check_schema(file.schema, "measure file")?;
    if !file.atom.is_empty() || file.density.is_some() {
        return Err(Error::Parse("atoms/density blocks are for circle measures".into()));
    }
    let w = file.weights.ok_or_else(|| Error::Parse(format!("{}: missing weights", path.display())))?;
    FiniteMeasure::new(group.clone(), w)
}

fn circle_measure_file(path: &Path) -> Result<CircleMeasure> {
    let file: MeasureFile = read_toml(path)?;
    check_schema(file.schema, "measure file")?;
    if file.weights.is_some() {
        return Err(Error::Parse("weights are for finite groups".into()));
    }
    let atoms = file.atom.into_iter().map(|a| Atom { location: a.location, mass: a.mass }).collect();
    let density = match file.density {
        Some(d) => Density::new(d.breaks, d.values)?,
        None => Density::zero(),
    };
    CircleMeasure::new(atoms, density)
}

#[derive(Debug, Clone)]
pub enum LoadedFunction {
    Finite(TestFunction),
    Circle(CircleFunction),
}

/// Finite groups: `values:a,b,...`, `indicator:x,y,...` (centered), `zero`.
/// Circle: `cos:k`, `sin:k`, `sign` (±1 on the two half circles), `zero`.
/// Anything else is a function file.
pub fn load_function(group: &LoadedGroup, spec: &str, base: Option<&Path>) -> Result<LoadedFunction> {
    let spec = spec.trim();
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match group {
        LoadedGroup::Finite { group, .. } => {
            let g = group.clone();
            let f = match head {
                "values" => TestFunction::new(g, parse_floats(rest)?)?,
                "indicator" => TestFunction::centered_indicator(g.clone(), &parse_elements(&g, rest)?)?,
                "zero" => TestFunction::zero(g),
                _ => {
                    let file: FunctionFile = read_toml(&resolve(base, spec))?;
                    check_schema(file.schema, "function file")?;
                    let v = file.values.ok_or_else(|| Error::Parse(format!("{spec}: missing values")))?;
                    TestFunction::new(g, v)?
                }
            };
            Ok(LoadedFunction::Finite(f))
        }
        LoadedGroup::Circle => {
            let harmonic = |k: &str| -> Result<Vec<f64>> {
                let k: usize = k.trim().parse().map_err(|_| Error::Parse(format!("bad frequency in {spec:?}")))?;
                if k == 0 {
                    return Err(Error::Parse("frequency must be positive".into()));
                }
                let mut c = vec![0.0; k];
                c[k - 1] = 1.0;
                Ok(c)
            };
            let f = match head {
                "cos" => CircleFunction::trig(0.0, harmonic(rest)?, Vec::new()),
                "sin" => CircleFunction::trig(0.0, Vec::new(), harmonic(rest)?),
                "sign" => CircleFunction::piecewise(vec![0.0, 0.5], vec![1.0, -1.0])?,
                "zero" => CircleFunction::trig(0.0, Vec::new(), Vec::new()),
                _ => {
                    let file: FunctionFile = read_toml(&resolve(base, spec))?;
                    check_schema(file.schema, "function file")?;
                    match (file.piecewise, file.trig) {
                        (Some(p), None) => CircleFunction::piecewise(p.breaks, p.values)?,
                        (None, Some(t)) => CircleFunction::trig(t.constant, t.cos, t.sin),
                        _ => return Err(Error::Parse(format!("{spec}: give exactly one of piecewise or trig"))),
                    }
                }
            };
            Ok(LoadedFunction::Circle(f))
        }
    }
}
