//! Scenario configuration: a TOML file with CLI flag overrides (flags win).
//! The canonical serialization is hashed into every report header so reruns
//! are attributable.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use hyers_lab_core::{ControlSpec, Point, SymmetricKind, SymmetricSpec, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Which catalog map the scenario exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionKind {
    Exact,
    PowerPerturbed,
    AbsProduct,
    Gajda,
}

impl std::str::FromStr for FunctionKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(FunctionKind::Exact),
            "power-perturbed" => Ok(FunctionKind::PowerPerturbed),
            "abs-product" => Ok(FunctionKind::AbsProduct),
            "gajda" => Ok(FunctionKind::Gajda),
            other => Err(format!(
                "unknown function '{other}' (expected exact, power-perturbed, abs-product or gajda)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    /// Evenly spaced values, `min` first; a single-count axis sits at `min`.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + step * i as f64).collect()
    }
}

impl std::str::FromStr for AxisSpec {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid spec '{s}' is not min:max:count"));
        }
        let min: f64 = parts[0].parse().map_err(|e| format!("bad grid min: {e}"))?;
        let max: f64 = parts[1].parse().map_err(|e| format!("bad grid max: {e}"))?;
        let count: usize = parts[2].parse().map_err(|e| format!("bad grid count: {e}"))?;
        Ok(AxisSpec { min, max, count })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n: usize,
    pub d: usize,
    pub eps: f64,
    /// Control exponent (and the perturbation exponent of the catalog map).
    pub r: f64,
    /// Multiadditive kernel coefficient; `threshold` fits one when absent.
    pub c: Option<f64>,
    /// Perturbation amplitude of the power-perturbed map.
    pub beta: f64,
    /// Delta sweep for the threshold command.
    pub delta: Vec<f64>,
    /// Alpha sweep override; defaults to 9 even values across the
    /// non-uniqueness interval widened by 50%.
    pub alpha: Option<Vec<f64>>,
    /// Exponent grid for the constants table.
    pub r_grid: Vec<f64>,
    pub function: FunctionKind,
    /// Per-axis grid; a single entry replicates across all n*d axes.
    pub grid: Vec<AxisSpec>,
    pub samples: usize,
    pub seed: u64,
    pub k_max: usize,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            n: 2,
            d: 1,
            eps: 1.0,
            r: 0.5,
            c: None,
            beta: 0.1,
            delta: vec![0.25, 1.0, 4.0, 16.0],
            alpha: None,
            r_grid: vec![-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.5, 2.0, 3.0],
            function: FunctionKind::PowerPerturbed,
            grid: vec![AxisSpec { min: -4.0, max: 4.0, count: 9 }],
            samples: 10_000,
            seed: DEFAULT_SEED,
            k_max: 60,
            tol: 1e-12,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: ScenarioConfig = toml::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.d < 1 {
            bail!("need n >= 1 and d >= 1 (got n = {}, d = {})", self.n, self.d);
        }
        if !(self.eps > 0.0) {
            bail!("eps must be positive (got {})", self.eps);
        }
        if self.samples < 1 {
            bail!("samples must be at least 1");
        }
        if self.k_max < 1 {
            bail!("k_max must be at least 1");
        }
        if !(self.tol > 0.0) {
            bail!("tol must be positive (got {})", self.tol);
        }
        if self.grid.is_empty() {
            bail!("grid needs at least one axis spec");
        }
        for axis in &self.grid {
            if axis.count < 1 {
                bail!("grid counts must be at least 1");
            }
            if !(axis.min <= axis.max) {
                bail!("grid axis has min {} above max {}", axis.min, axis.max);
            }
        }
        if self.delta.iter().any(|&dlt| !(dlt > 0.0)) {
            bail!("every delta must be positive");
        }
        Ok(())
    }

    /// Canonical serialized form; parsing it back yields an equal config.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// First 16 hex digits of the SHA-256 of the canonical form, with the
    /// output destination and rendering format masked out: the hash
    /// identifies the scenario, not where its report lands.
    pub fn hash(&self) -> String {
        let mut scenario = self.clone();
        scenario.out = None;
        scenario.format = OutputFormat::Csv;
        let digest = Sha256::digest(scenario.canonical_toml().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// The grid axes expanded to all `n * d` coordinates.
    pub fn grid_axes(&self) -> Result<Vec<AxisSpec>> {
        let want = self.n * self.d;
        if self.grid.len() == 1 {
            return Ok(vec![self.grid[0]; want]);
        }
        if self.grid.len() != want {
            bail!("grid has {} axes but n*d = {want}", self.grid.len());
        }
        Ok(self.grid.clone())
    }

    /// Cartesian grid tuples in row-major order (last axis fastest).
    pub fn grid_points(&self) -> Result<Vec<Vec<Point>>> {
        let axes = self.grid_axes()?;
        let values: Vec<Vec<f64>> = axes.iter().map(AxisSpec::values).collect();
        let total: usize = values.iter().map(Vec::len).product();
        let mut points = Vec::with_capacity(total);
        let mut idx = vec![0usize; values.len()];
        for _ in 0..total {
            let coords: Vec<f64> = idx.iter().zip(&values).map(|(&i, v)| v[i]).collect();
            let tuple: Vec<Point> = coords
                .chunks(self.d)
                .map(|c| Point::new(c.to_vec()).expect("grid coordinates are finite"))
                .collect();
            points.push(tuple);
            for axis in (0..idx.len()).rev() {
                idx[axis] += 1;
                if idx[axis] < values[axis].len() {
                    break;
                }
                idx[axis] = 0;
            }
        }
        Ok(points)
    }

    /// Bounding box of the grid, used as the sampling box.
    pub fn sampling_box(&self) -> (f64, f64) {
        let lo = self.grid.iter().map(|a| a.min).fold(f64::INFINITY, f64::min);
        let hi = self.grid.iter().map(|a| a.max).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    pub fn kernel_coefficient(&self) -> f64 {
        self.c.unwrap_or(1.0)
    }

    pub fn symmetric_spec(&self) -> Result<SymmetricSpec> {
        let kind = match self.function {
            FunctionKind::Exact => {
                SymmetricKind::ExactMultiadditive { c: self.kernel_coefficient() }
            }
            FunctionKind::PowerPerturbed => SymmetricKind::PowerPerturbed {
                c: self.kernel_coefficient(),
                beta: self.beta,
                r: self.r,
            },
            FunctionKind::AbsProduct => SymmetricKind::AbsProduct { eps: self.eps },
            FunctionKind::Gajda => SymmetricKind::GajdaMulti { eps: self.eps },
        };
        Ok(SymmetricSpec::new(self.n, self.d, kind)?)
    }

    pub fn control(&self) -> Result<ControlSpec> {
        Ok(ControlSpec::power(self.n, self.eps, self.r)?)
    }

    /// The alpha sweep: configured values, or 9 even values across the
    /// non-uniqueness interval around eps/2 widened by 50%.
    pub fn alpha_sweep(&self, delta: f64) -> Vec<f64> {
        if let Some(alphas) = &self.alpha {
            return alphas.clone();
        }
        let center = self.eps / 2.0;
        let half = 1.5 * delta;
        let axis = AxisSpec { min: center - half, max: center + half, count: 9 };
        axis.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let cfg = ScenarioConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.seed, 0x5EED);
        assert_eq!(cfg.k_max, 60);
    }

    #[test]
    fn round_trip_is_canonical() {
        let cfg = ScenarioConfig {
            n: 3,
            c: Some(2.0),
            out: Some(PathBuf::from("report.csv")),
            format: OutputFormat::Json,
            ..Default::default()
        };
        let text = cfg.canonical_toml();
        let back: ScenarioConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.canonical_toml(), text);
    }

    #[test]
    fn hash_tracks_content_not_destination() {
        let a = ScenarioConfig::default();
        let mut b = ScenarioConfig::default();
        assert_eq!(a.hash(), b.hash());
        b.out = Some(PathBuf::from("elsewhere.csv"));
        b.format = OutputFormat::Json;
        assert_eq!(a.hash(), b.hash());
        b.seed = 7;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }

    #[test]
    fn unknown_fields_rejected() {
        let err = toml::from_str::<ScenarioConfig>("bogus_knob = 3\n");
        assert!(err.is_err());
    }

    #[test]
    fn grid_expansion() {
        let cfg = ScenarioConfig { n: 2, d: 1, ..Default::default() };
        let pts = cfg.grid_points().unwrap();
        assert_eq!(pts.len(), 81);
        // last axis fastest
        assert_eq!(pts[0][0].coords()[0], -4.0);
        assert_eq!(pts[0][1].coords()[0], -4.0);
        assert_eq!(pts[1][0].coords()[0], -4.0);
        assert_eq!(pts[1][1].coords()[0], -3.0);
        // middle of the default 9-point axis hits zero exactly
        assert_eq!(pts[40][0].coords()[0], 0.0);
        assert_eq!(pts[40][1].coords()[0], 0.0);
    }

    #[test]
    fn axis_parsing() {
        let axis: AxisSpec = "-4:4:9".parse().unwrap();
        assert_eq!(axis, AxisSpec { min: -4.0, max: 4.0, count: 9 });
        assert!("1:2".parse::<AxisSpec>().is_err());
    }

    #[test]
    fn alpha_sweep_spans_widened_interval() {
        let cfg = ScenarioConfig { eps: 1.0, ..Default::default() };
        let sweep = cfg.alpha_sweep(0.25);
        assert_eq!(sweep.len(), 9);
        assert_eq!(sweep[0], 0.5 - 0.375);
        assert_eq!(sweep[8], 0.5 + 0.375);
        assert_eq!(sweep[4], 0.5);
    }
}
