//! Strict JSON experiment configuration.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dynamics::{Sampling, StepperConfig};
use crate::escape_mc::{SweepSpec, SweepVariable};
use crate::landscapes::{Activation, DatasetSpec};
use crate::noise_lab::DEFAULT_FILTER;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    NoiseHist,
    CovFit,
    EscapeSweep,
    TheoryTable,
    Occupancy,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::NoiseHist => "noise-hist",
            ExperimentKind::CovFit => "cov-fit",
            ExperimentKind::EscapeSweep => "escape-sweep",
            ExperimentKind::TheoryTable => "theory-table",
            ExperimentKind::Occupancy => "occupancy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LandscapeConfig {
    StyblinskiTang {
        dim: usize,
    },
    /// Styblinski-Tang evaluated at `θ − x` for Gaussian data `x`.
    ShiftedSt {
        dim: usize,
        dataset: DatasetSpec,
    },
    Quadratic {
        dim: usize,
        curvature: f64,
    },
    DoubleWell {
        height: f64,
        tilt: f64,
    },
    Logistic {
        dataset: DatasetSpec,
    },
    Mlp {
        dataset: DatasetSpec,
        #[serde(default = "default_width")]
        width: usize,
        #[serde(default = "default_depth")]
        depth: usize,
        #[serde(default = "default_activation")]
        activation: Activation,
    },
}

fn default_width() -> usize {
    10
}

fn default_depth() -> usize {
    3
}

fn default_activation() -> Activation {
    Activation::Relu
}

/// Where noise is measured or escapes start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointConfig {
    Explicit(Vec<f64>),
    Named(NamedPoint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedPoint {
    /// Known minimum for analytic surfaces, otherwise the result of
    /// pretraining from the origin (logistic) or a seeded init (MLP).
    Minimum,
    /// Seeded initial point for the MLP, zeros elsewhere.
    Init,
}

impl Default for PointConfig {
    fn default() -> Self {
        PointConfig::Named(NamedPoint::Minimum)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PretrainConfig {
    #[serde(default = "default_pretrain_lr")]
    pub lr: f64,
    #[serde(default = "default_pretrain_iters")]
    pub max_iters: usize,
    #[serde(default = "default_grad_tol")]
    pub grad_tol: f64,
}

fn default_pretrain_lr() -> f64 {
    0.1
}

fn default_pretrain_iters() -> usize {
    20_000
}

fn default_grad_tol() -> f64 {
    1e-4
}

impl Default for PretrainConfig {
    fn default() -> Self {
        PretrainConfig { lr: default_pretrain_lr(), max_iters: default_pretrain_iters(), grad_tol: default_grad_tol() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub batch_sizes: Vec<usize>,
    #[serde(default = "default_draws")]
    pub draws: usize,
    #[serde(default = "default_bins")]
    pub bins: usize,
    /// Tail index of the stable baseline.
    #[serde(default = "default_alpha")]
    pub stable_alpha: f64,
}

fn default_draws() -> usize {
    10_000
}

fn default_bins() -> usize {
    50
}

fn default_alpha() -> f64 {
    1.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceConfig {
    pub batch_sizes: Vec<usize>,
    #[serde(default = "default_cov_draws")]
    pub draws: usize,
    #[serde(default = "default_filter")]
    pub filter: (f64, f64),
}

fn default_cov_draws() -> usize {
    100_000
}

fn default_filter() -> (f64, f64) {
    DEFAULT_FILTER
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValleyConfig {
    #[serde(default)]
    pub start: PointConfig,
    /// Per-coordinate half-width of the box around the start point.
    pub radius: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: u64,
}

fn default_max_iters() -> u64 {
    10_000_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryConfig {
    pub diffusions: Vec<f64>,
    pub eta: f64,
    /// Simulated trials per row; 0 evaluates the closed form only.
    #[serde(default)]
    pub trials: usize,
    #[serde(default = "default_max_iters")]
    pub max_iters: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OccupancyConfig {
    pub regions: [RegionConfig; 2],
    pub total_iters: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub seed: u64,
    /// Not echoed into summaries so replays in other directories match.
    #[serde(default, skip_serializing)]
    pub output_dir: Option<PathBuf>,
    pub landscape: LandscapeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<StepperConfig>,
    #[serde(default)]
    pub point: PointConfig,
    #[serde(default)]
    pub pretrain: PretrainConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariance: Option<CovarianceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valley: Option<ValleyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<TheoryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occupancy: Option<OccupancyConfig>,
}

/// A rejected configuration, located in the source text when possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "{field}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

fn field_error(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { line: None, field: Some(field.to_string()), message: message.into() }
}

fn positive(field: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(field_error(field, format!("must be a positive finite number, got {v}")))
    }
}

fn at_least(field: &str, v: usize, min: usize) -> Result<(), ConfigError> {
    if v >= min {
        Ok(())
    } else {
        Err(field_error(field, format!("must be at least {min}, got {v}")))
    }
}

fn require<'a, T>(field: &str, v: &'a Option<T>, kind: ExperimentKind) -> Result<&'a T, ConfigError> {
    v.as_ref().ok_or_else(|| field_error(field, format!("section is required for {}", kind.name())))
}

fn check_dataset(prefix: &str, d: &DatasetSpec) -> Result<(), ConfigError> {
    at_least(&format!("{prefix}.samples"), d.samples, 1)?;
    at_least(&format!("{prefix}.input_dim"), d.input_dim, 1)
}

impl LandscapeConfig {
    pub fn dim(&self) -> usize {
        match self {
            LandscapeConfig::StyblinskiTang { dim }
            | LandscapeConfig::ShiftedSt { dim, .. }
            | LandscapeConfig::Quadratic { dim, .. } => *dim,
            LandscapeConfig::DoubleWell { .. } => 1,
            LandscapeConfig::Logistic { dataset } => dataset.input_dim,
            LandscapeConfig::Mlp { dataset, width, depth, .. } => {
                let (i, w, d) = (dataset.input_dim, *width, *depth);
                (i * w + w) + (d.saturating_sub(2)) * (w * w + w) + (w + 1)
            }
        }
    }

    pub fn sample_count(&self) -> Option<usize> {
        match self {
            LandscapeConfig::ShiftedSt { dataset, .. }
            | LandscapeConfig::Logistic { dataset }
            | LandscapeConfig::Mlp { dataset, .. } => Some(dataset.samples),
            _ => None,
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self {
            LandscapeConfig::StyblinskiTang { dim } => at_least("landscape.dim", *dim, 1),
            LandscapeConfig::ShiftedSt { dim, dataset } => {
                at_least("landscape.dim", *dim, 1)?;
                check_dataset("landscape.dataset", dataset)?;
                if dataset.input_dim != *dim {
                    return Err(field_error("landscape.dataset.input_dim", format!("must equal landscape.dim ({dim})")));
                }
                Ok(())
            }
            LandscapeConfig::Quadratic { dim, curvature } => {
                at_least("landscape.dim", *dim, 1)?;
                positive("landscape.curvature", *curvature)
            }
            LandscapeConfig::DoubleWell { height, tilt } => {
                positive("landscape.height", *height)?;
                if !tilt.is_finite() {
                    return Err(field_error("landscape.tilt", "must be finite"));
                }
                Ok(())
            }
            LandscapeConfig::Logistic { dataset } => check_dataset("landscape.dataset", dataset),
            LandscapeConfig::Mlp { dataset, width, depth, .. } => {
                check_dataset("landscape.dataset", dataset)?;
                at_least("landscape.width", *width, 1)?;
                at_least("landscape.depth", *depth, 2)
            }
        }
    }
}

impl ExperimentConfig {
    /// Parses strict JSON; syntax and schema errors carry serde's line.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| {
            let message = e.to_string();
            let field = message
                .split('`')
                .nth(1)
                .filter(|_| message.contains("field"))
                .map(str::to_string);
            let message = match message.rfind(" at line ") {
                Some(i) => message[..i].to_string(),
                None => message,
            };
            ConfigError { line: Some(e.line()), field, message }
        })
    }

    /// Like [`Self::from_json`] followed by [`Self::validate`], with semantic
    /// errors located at the offending key.
    pub fn parse(text: &str, kind: ExperimentKind) -> Result<Self, ConfigError> {
        let mut config = Self::from_json(text)?;
        match config.experiment {
            Some(k) if k != kind => {
                return Err(ConfigError {
                    line: locate(text, "experiment"),
                    field: Some("experiment".into()),
                    message: format!("config is for {}, not {}", k.name(), kind.name()),
                })
            }
            _ => config.experiment = Some(kind),
        }
        config.validate().map_err(|mut e| {
            e.line = e.field.as_deref().and_then(|f| locate(text, f));
            e
        })?;
        Ok(config)
    }

    pub fn kind(&self) -> ExperimentKind {
        self.experiment.unwrap_or(ExperimentKind::EscapeSweep)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let kind = self.kind();
        self.landscape.validate()?;
        if let PointConfig::Explicit(p) = &self.point {
            if p.len() != self.landscape.dim() {
                return Err(field_error("point", format!("has {} entries, landscape has {}", p.len(), self.landscape.dim())));
            }
        }
        positive("pretrain.lr", self.pretrain.lr)?;
        positive("pretrain.grad_tol", self.pretrain.grad_tol)?;
        if let Some(d) = &self.dynamics {
            self.validate_dynamics(d)?;
        }
        let samples = self.landscape.sample_count();
        match kind {
            ExperimentKind::NoiseHist => {
                let n = require("noise", &self.noise, kind)?;
                self.validate_batches("noise.batch_sizes", &n.batch_sizes, samples)?;
                at_least("noise.draws", n.draws, 100)?;
                at_least("noise.bins", n.bins, 2)?;
                if !(n.stable_alpha > 0.0 && n.stable_alpha <= 2.0) {
                    return Err(field_error("noise.stable_alpha", format!("must lie in (0, 2], got {}", n.stable_alpha)));
                }
            }
            ExperimentKind::CovFit => {
                let c = require("covariance", &self.covariance, kind)?;
                self.validate_batches("covariance.batch_sizes", &c.batch_sizes, samples)?;
                at_least("covariance.draws", c.draws, 2)?;
                let (lo, hi) = c.filter;
                if !(lo >= 0.0 && hi > lo) {
                    return Err(field_error("covariance.filter", format!("needs 0 <= low < high, got ({lo}, {hi})")));
                }
            }
            ExperimentKind::EscapeSweep => {
                let d = require("dynamics", &self.dynamics, kind)?;
                let v = require("valley", &self.valley, kind)?;
                self.validate_valley(v)?;
                let s = require("sweep", &self.sweep, kind)?;
                s.validate().map_err(|e| field_error("sweep", e.to_string()))?;
                s.variable.transforms(d).map_err(|e| field_error("sweep.variable", e.to_string()))?;
                if s.variable == SweepVariable::BatchSize {
                    if let Some(m) = samples {
                        if s.grid.iter().any(|&b| b as usize > m) {
                            return Err(field_error("sweep.grid", format!("batch sizes exceed the {m} samples")));
                        }
                    }
                }
            }
            ExperimentKind::TheoryTable => {
                if !matches!(self.landscape, LandscapeConfig::StyblinskiTang { .. } | LandscapeConfig::DoubleWell { .. }) {
                    return Err(field_error("landscape.kind", "theory-table needs styblinski-tang or double-well"));
                }
                let t = require("theory", &self.theory, kind)?;
                if t.diffusions.is_empty() {
                    return Err(field_error("theory.diffusions", "must not be empty"));
                }
                for &d in &t.diffusions {
                    positive("theory.diffusions", d)?;
                }
                positive("theory.eta", t.eta)?;
                if t.trials > 0 {
                    at_least("theory.trials", t.trials, 3)?;
                    at_least("theory.max_iters", t.max_iters as usize, 1)?;
                }
            }
            ExperimentKind::Occupancy => {
                require("dynamics", &self.dynamics, kind)?;
                let o = require("occupancy", &self.occupancy, kind)?;
                for (i, r) in o.regions.iter().enumerate() {
                    positive(&format!("occupancy.regions[{i}].radius"), r.radius)?;
                    if r.center.len() != self.landscape.dim() {
                        return Err(field_error(
                            &format!("occupancy.regions[{i}].center"),
                            format!("has {} entries, landscape has {}", r.center.len(), self.landscape.dim()),
                        ));
                    }
                }
                at_least("occupancy.total_iters", o.total_iters as usize, 1)?;
            }
        }
        Ok(())
    }

    fn validate_dynamics(&self, d: &StepperConfig) -> Result<(), ConfigError> {
        let eta = d.eta();
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(field_error("dynamics.eta", format!("must be a positive finite number, got {eta}")));
        }
        match d {
            StepperConfig::Sgd(c) => {
                if self.landscape.sample_count().is_none() {
                    return Err(field_error("dynamics.kind", "sgd needs a data-driven landscape"));
                }
                self.validate_batches("dynamics.batch_size", &[c.batch_size], self.landscape.sample_count())
            }
            StepperConfig::Sgld(c) => {
                if !(c.diffusion >= 0.0 && c.diffusion.is_finite()) {
                    return Err(field_error("dynamics.diffusion", format!("must be nonnegative, got {}", c.diffusion)));
                }
                if let Some(b) = c.batch_size {
                    if self.landscape.sample_count().is_none() {
                        return Err(field_error("dynamics.batch_size", "needs a data-driven landscape"));
                    }
                    self.validate_batches("dynamics.batch_size", &[b], self.landscape.sample_count())?;
                }
                if c.sampling != Sampling::WithReplacement && c.batch_size.is_none() {
                    return Err(field_error("dynamics.sampling", "only meaningful with batch_size"));
                }
                Ok(())
            }
        }
    }

    fn validate_batches(&self, field: &str, batches: &[usize], samples: Option<usize>) -> Result<(), ConfigError> {
        let m = samples.ok_or_else(|| field_error("landscape.kind", "needs a data-driven landscape"))?;
        if batches.is_empty() {
            return Err(field_error(field, "must not be empty"));
        }
        for &b in batches {
            if b == 0 || b > m {
                return Err(field_error(field, format!("batch size {b} not in 1..={m}")));
            }
        }
        Ok(())
    }

    fn validate_valley(&self, v: &ValleyConfig) -> Result<(), ConfigError> {
        positive("valley.radius", v.radius)?;
        at_least("valley.max_iters", v.max_iters as usize, 1)?;
        if let PointConfig::Explicit(p) = &v.start {
            if p.len() != self.landscape.dim() {
                return Err(field_error("valley.start", format!("has {} entries, landscape has {}", p.len(), self.landscape.dim())));
            }
        }
        Ok(())
    }
}

/// 1-based line of the key at the end of a dotted `path`, searching each
/// segment after the previous one. Array indices are ignored.
pub fn locate(text: &str, path: &str) -> Option<usize> {
    let mut pos = 0;
    let mut found = None;
    for seg in path.split('.') {
        let key = seg.split('[').next().unwrap_or(seg);
        let needle = format!("\"{key}\"");
        match text[pos..].find(&needle) {
            Some(i) => {
                pos += i;
                found = Some(pos);
                pos += needle.len();
            }
            None => break,
        }
    }
    found.map(|p| text[..p].matches('\n').count() + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWEEP: &str = r#"{
  "seed": 7,
  "landscape": {"kind": "styblinski-tang", "dim": 1},
  "dynamics": {"kind": "sgld", "eta": 0.01, "diffusion": 5.0},
  "valley": {"start": [-2.9], "radius": 5.6},
  "sweep": {"variable": "diffusion_d", "grid": [4, 5, 6]}
}"#;

    #[test]
    fn defaults_are_resolved() {
        let c = ExperimentConfig::parse(SWEEP, ExperimentKind::EscapeSweep).unwrap();
        assert_eq!(c.sweep.as_ref().unwrap().trials_per_point, 100);
        assert_eq!(c.valley.as_ref().unwrap().max_iters, 10_000_000);
        let echo = serde_json::to_string(&c).unwrap();
        assert!(echo.contains("\"experiment\":\"escape-sweep\""));
        assert!(echo.contains("\"trials_per_point\":100"));
        assert!(echo.contains("\"sampling\":\"with-replacement\""));
        let back: ExperimentConfig = serde_json::from_str(&echo).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn negative_eta_names_field_and_line() {
        let bad = SWEEP.replace("\"eta\": 0.01", "\"eta\": -0.1");
        let e = ExperimentConfig::parse(&bad, ExperimentKind::EscapeSweep).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("dynamics.eta"));
        assert_eq!(e.line, Some(4));
        assert!(e.to_string().starts_with("line 4: dynamics.eta:"));
    }

    #[test]
    fn unknown_key_rejected() {
        let bad = SWEEP.replace("\"radius\": 5.6", "\"radius\": 5.6, \"radious\": 1");
        let e = ExperimentConfig::parse(&bad, ExperimentKind::EscapeSweep).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("radious"));
        assert_eq!(e.line, Some(5));
    }

    #[test]
    fn syntax_error_has_line() {
        let e = ExperimentConfig::parse("{\n  \"seed\": 1,,\n}", ExperimentKind::EscapeSweep).unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn mismatched_subcommand() {
        let text = SWEEP.replace("\"seed\": 7", "\"experiment\": \"occupancy\", \"seed\": 7");
        let e = ExperimentConfig::parse(&text, ExperimentKind::EscapeSweep).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("experiment"));
    }

    #[test]
    fn missing_section() {
        let text = SWEEP.replace(",\n  \"sweep\": {\"variable\": \"diffusion_d\", \"grid\": [4, 5, 6]}", "");
        let e = ExperimentConfig::parse(&text, ExperimentKind::EscapeSweep).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("sweep"));
    }

    #[test]
    fn sgd_needs_data() {
        let text = SWEEP.replace(r#"{"kind": "sgld", "eta": 0.01, "diffusion": 5.0}"#, r#"{"kind": "sgd", "eta": 0.01, "batch_size": 2}"#);
        let e = ExperimentConfig::parse(&text, ExperimentKind::EscapeSweep).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("dynamics.kind"));
    }

    #[test]
    fn mlp_dim_matches_landscape() {
        use crate::landscapes::{mlp_landscape, Landscape};
        let ds = DatasetSpec::new(10, 4, 0);
        for depth in 2..5 {
            let cfg = LandscapeConfig::Mlp { dataset: ds.clone(), width: 3, depth, activation: Activation::Tanh };
            assert_eq!(cfg.dim(), mlp_landscape(&ds, 3, depth, Activation::Tanh).unwrap().dim());
        }
    }

    #[test]
    fn locate_nested_keys() {
        let text = "{\n \"a\": {\n  \"eta\": 1\n },\n \"b\": {\n  \"eta\": 2\n }\n}";
        assert_eq!(locate(text, "b.eta"), Some(6));
        assert_eq!(locate(text, "a.eta"), Some(3));
        assert_eq!(locate(text, "missing"), None);
    }
}
