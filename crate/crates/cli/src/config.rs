use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use segfront_core::analysis::{AnalysisParams, SweepAxis};
use segfront_core::model::{GridSpec, ProblemSpec};
use segfront_core::SolverConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub x_left: f64,
    pub x_right: f64,
    pub nx: usize,
    pub dt: f64,
    /// Explicit snapshot times; takes precedence over `snapshot_every`.
    #[serde(default)]
    pub snapshot_times: Option<Vec<f64>>,
    #[serde(default)]
    pub snapshot_every: Option<f64>,
}

impl GridSection {
    pub fn resolve(&self, horizon: f64) -> Result<GridSpec> {
        let snapshots = match (&self.snapshot_times, self.snapshot_every) {
            (Some(t), _) => t.clone(),
            (None, Some(every)) if every > 0.0 && every.is_finite() => GridSpec::uniform_snapshots(every, horizon),
            (None, Some(every)) => bail!("snapshot_every must be positive, got {every}"),
            (None, None) => Vec::new(),
        };
        Ok(GridSpec::new(self.x_left, self.x_right, self.nx, self.dt, snapshots)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("segfront-out") }
    }
}

/// Raw contents of a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub seed: u64,
    pub problem: ProblemSpec,
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub analysis: AnalysisParams,
    #[serde(default)]
    pub output: OutputSection,
}

/// Validated configuration of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub spec: ProblemSpec,
    pub grid: GridSpec,
    pub solver: SolverConfig,
    pub sweep: Option<SweepSection>,
    pub analysis: AnalysisParams,
    pub output_dir: PathBuf,
    pub seed: u64,
}

#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text, overrides)
    }

    pub fn parse(text: &str, overrides: &Overrides) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).context("parsing config")?;
        let spec = file.problem;
        spec.validate()?;
        let grid = file.grid.resolve(spec.horizon)?;
        file.solver.validate()?;
        file.analysis.validate()?;
        if let Some(s) = &file.sweep {
            if s.values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                bail!("sweep values must be positive and finite");
            }
            if !s.values.windows(2).all(|w| w[0] < w[1]) {
                bail!("sweep values must be strictly increasing");
            }
        }
        Ok(RunConfig {
            spec,
            grid,
            solver: file.solver,
            sweep: file.sweep,
            analysis: file.analysis,
            output_dir: overrides.output.clone().unwrap_or(file.output.dir),
            seed: overrides.seed.unwrap_or(file.seed),
        })
    }

    /// SHA-256 of the resolved configuration in canonical JSON form,
    /// excluding the output directory.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("output_dir");
        }
        let canonical = serde_json::to_vec(&value).expect("config serializes");
        hex::encode(Sha256::digest(canonical))
    }

    pub fn sweep(&self, axis: SweepAxis) -> Result<&[f64]> {
        match &self.sweep {
            Some(s) if s.axis == axis => Ok(&s.values),
            Some(s) => bail!("config sweeps {}, this command needs {}", s.axis.name(), axis.name()),
            None => bail!("config has no [sweep] section"),
        }
    }
}
