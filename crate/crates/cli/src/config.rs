//! Scan configuration: one JSON document, optionally patched from the command
//! line with `--set path=value`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use deformed_e2::models::{Convention, HamiltonianCoeffs, Mode, Mu};
use deformed_e2::spectral::{make_representation, RepKind, Representation};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Pt5General,
    Pt5Special,
    Toy,
    GeneralCoeffs,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Pt5General => "pt5-general",
            ModelKind::Pt5Special => "pt5-special",
            ModelKind::Toy => "toy",
            ModelKind::GeneralCoeffs => "general-coeffs",
        }
    }

    /// Parameter names accepted in `fixed` and on axes (besides `theta`).
    pub fn parameter_names(self) -> Vec<String> {
        match self {
            ModelKind::Pt5General | ModelKind::Pt5Special => (1..=9).map(|k| format!("mu{k}")).collect(),
            ModelKind::Toy => ["mu1", "mu3", "mu4", "lambda"].map(String::from).to_vec(),
            ModelKind::GeneralCoeffs => {
                (1..=10).flat_map(|k| [format!("c{k}_re"), format!("c{k}_im")]).collect()
            }
        }
    }

    pub fn mode(self) -> Mode {
        if self == ModelKind::Pt5Special {
            Mode::Special
        } else {
            Mode::General
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// `steps` evenly spaced values, endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|k| if k == n { self.max } else { self.min + (self.max - self.min) * k as f64 / n as f64 })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepConfig {
    pub kind: String,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub j0: f64,
    /// Truncation increment for the convergence filter; a quarter of the first
    /// dimension if absent.
    #[serde(default)]
    pub delta: Option<usize>,
}

impl Default for RepConfig {
    fn default() -> Self {
        RepConfig { kind: "fock".into(), dims: vec![60], j0: 0.0, delta: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionChoice {
    Oracle,
    Paper,
    #[default]
    Both,
}

impl ConventionChoice {
    pub fn includes(self, c: Convention) -> bool {
        match self {
            ConventionChoice::Both => true,
            ConventionChoice::Oracle => c == Convention::Oracle,
            ConventionChoice::Paper => c == Convention::Paper,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelConfig {
    /// Inclusive range of level indices `n`.
    #[serde(default = "default_levels")]
    pub levels: [i64; 2],
    #[serde(default)]
    pub convention: ConventionChoice,
}

fn default_levels() -> [i64; 2] {
    [-3, 3]
}

impl Default for LevelConfig {
    fn default() -> Self {
        LevelConfig { levels: default_levels(), convention: ConventionChoice::Both }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EpCriterion {
    #[default]
    Overall,
    FirstInequality,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpConfig {
    pub param: String,
    pub bracket: [f64; 2],
    #[serde(default)]
    pub criterion: EpCriterion,
}

fn default_seed() -> u64 {
    42
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub model: ModelKind,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    #[serde(default)]
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub representation: Option<RepConfig>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Seed of the multi-start solver used for `general-coeffs`.
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub spectrum: LevelConfig,
    #[serde(default)]
    pub ep: Option<EpConfig>,
}

/// Reads the config file (or starts from `{}`) and applies `--set` overrides.
pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<ScanConfig, CliError> {
    let mut doc = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            serde_json::from_str::<Value>(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => Value::Object(Default::default()),
    };
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let cfg: ScanConfig = serde_json::from_value(doc).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

/// `a.b.0.c=value`: walks (creating objects as needed) and stores `value`,
/// parsed as JSON when possible and as a string otherwise.
pub fn apply_override(doc: &mut Value, spec: &str) -> Result<(), CliError> {
    let (path, raw) = spec.split_once('=').ok_or_else(|| CliError::Config(format!("override `{spec}` lacks `=`")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!("bad override path `{path}`")));
    }
    let mut cur = doc;
    for (i, key) in keys.iter().enumerate() {
        let last = i + 1 == keys.len();
        cur = match cur {
            Value::Array(items) => {
                let idx: usize = key.parse().map_err(|_| CliError::Config(format!("`{key}` is not an index in `{path}`")))?;
                items.get_mut(idx).ok_or_else(|| CliError::Config(format!("index {idx} out of range in `{path}`")))?
            }
            Value::Object(map) => map.entry(key.to_string()).or_insert_with(|| Value::Object(Default::default())),
            _ => return Err(CliError::Config(format!("`{path}` descends into a scalar"))),
        };
        if last {
            *cur = value.clone();
        }
    }
    Ok(())
}

impl ScanConfig {
    fn check_name(&self, name: &str, allow_theta: bool) -> Result<(), CliError> {
        if (allow_theta && name == "theta") || self.model.parameter_names().iter().any(|n| n == name) {
            Ok(())
        } else {
            Err(CliError::Config(format!(
                "`{name}` is not a parameter of {} (expected one of {})",
                self.model.name(),
                self.model.parameter_names().join(", ")
            )))
        }
    }

    /// Checks names, axes and the representation block.
    pub fn validate(&self, need_axes: bool) -> Result<(), CliError> {
        for name in self.fixed.keys() {
            self.check_name(name, false)?;
        }
        for v in self.fixed.values().chain([&self.theta]) {
            if !v.is_finite() {
                return Err(CliError::Config("parameter values must be finite".into()));
            }
        }
        if need_axes && !(1..=2).contains(&self.axes.len()) {
            return Err(CliError::Config(format!("classify needs one or two axes, got {}", self.axes.len())));
        }
        for (i, a) in self.axes.iter().enumerate() {
            self.check_name(&a.param, true)?;
            if a.steps < 2 {
                return Err(CliError::Config(format!("axis `{}` needs steps >= 2", a.param)));
            }
            if !a.min.is_finite() || !a.max.is_finite() {
                return Err(CliError::Config(format!("axis `{}` has non-finite bounds", a.param)));
            }
            if self.axes[..i].iter().any(|b| b.param == a.param) {
                return Err(CliError::Config(format!("axis `{}` given twice", a.param)));
            }
        }
        if self.model == ModelKind::Toy && self.has("mu3") && self.has("lambda") {
            return Err(CliError::Config("toy takes either mu3 or lambda, not both".into()));
        }
        if let Some(r) = &self.representation {
            r.kind.parse::<RepKind>().map_err(|e| CliError::Config(e.to_string()))?;
        }
        if let Some(ep) = &self.ep {
            self.check_name(&ep.param, true)?;
        }
        Ok(())
    }

    fn has(&self, name: &str) -> bool {
        self.fixed.contains_key(name) || self.axes.iter().any(|a| a.param == name)
    }

    /// Every grid point as `(values per axis, full assignment)`, in row-major
    /// order with the first axis outermost.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let mut rows: Vec<Vec<f64>> = vec![vec![]];
        for axis in &self.axes {
            let vals = axis.values();
            rows = rows.into_iter().flat_map(|r| vals.iter().map(move |v| [r.clone(), vec![*v]].concat())).collect();
        }
        rows
    }

    /// Fixed parameters with one grid point's axis values laid over them.
    pub fn assignment(&self, point: &[f64]) -> Point {
        let mut values = self.fixed.clone();
        let mut theta = self.theta;
        for (axis, v) in self.axes.iter().zip(point) {
            if axis.param == "theta" {
                theta = *v;
            } else {
                values.insert(axis.param.clone(), *v);
            }
        }
        Point { values, theta }
    }

    pub fn base_point(&self) -> Point {
        Point { values: self.fixed.clone(), theta: self.theta }
    }

    pub fn representation(&self, theta: f64) -> Result<(Representation, Option<usize>), CliError> {
        let rc = self.representation.clone().unwrap_or_default();
        let kind: RepKind = rc.kind.parse().map_err(|e: deformed_e2::Error| CliError::Config(e.to_string()))?;
        let rep = make_representation(kind, theta, &rc.dims, rc.j0).map_err(|e| CliError::Numeric(e.to_string()))?;
        Ok((rep, rc.delta))
    }
}

/// One fully specified parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub values: BTreeMap<String, f64>,
    pub theta: f64,
}

impl Point {
    pub fn get(&self, name: &str) -> f64 {
        self.values.get(name).copied().unwrap_or(0.0)
    }

    pub fn mu(&self) -> Mu<f64> {
        let mut m = [0.0; 9];
        for (k, x) in m.iter_mut().enumerate() {
            *x = self.get(&format!("mu{}", k + 1));
        }
        Mu::new(m)
    }

    pub fn coeffs(&self) -> HamiltonianCoeffs<f64> {
        let mut c = HamiltonianCoeffs::default();
        for k in 1..=10 {
            c.set(k, Complex64::new(self.get(&format!("c{k}_re")), self.get(&format!("c{k}_im"))));
        }
        c
    }
}
