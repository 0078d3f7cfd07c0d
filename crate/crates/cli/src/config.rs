//! Experiment configuration files (TOML, or JSON by extension).

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use sisampling::config::{GeneratorSpec, SetSpec};
use sisampling::counterexample::VanisherCase;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Option<String>,
    pub generator: Option<GeneratorSpec>,
    pub lambda: Option<SetSpec>,
    pub gamma: Option<SetSpec>,
    #[serde(default)]
    pub params: Params,
    pub vanisher: Option<VanisherParams>,
    pub output: Option<OutputConfig>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Window radii for the sampling sweep.
    pub windows: Option<Vec<f64>>,
    /// Window radii for the Gabor sweep.
    pub gabor_windows: Option<Vec<f64>>,
    /// Stability `b`-grid size.
    pub grid: Option<usize>,
    /// Gabor `x`-grid size.
    pub x_grid: Option<usize>,
    pub interior_margin: Option<f64>,
    /// Spectrum frequency range and sample count.
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_count: Option<usize>,
    /// Density the vanisher zero set is raised to in the restoration check.
    pub restore_density: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VanisherParams {
    pub case: VanisherCase,
    pub n: usize,
    pub b: Vec<f64>,
    #[serde(default = "one")]
    pub alpha: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<String>,
    #[serde(default = "yes")]
    pub csv: bool,
}

fn yes() -> bool {
    true
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let cfg: Self = if is_json {
            serde_json::from_str(&text).map_err(|e| {
                anyhow::anyhow!("{}:{}:{}: {e}", path.display(), e.line(), e.column())
            })?
        } else {
            toml::from_str(&text).map_err(|e| {
                let at = e
                    .span()
                    .map(|s| {
                        let line = text[..s.start].matches('\n').count() + 1;
                        format!(":{line}")
                    })
                    .unwrap_or_default();
                anyhow::anyhow!("{}{at}: {}", path.display(), e.message())
            })?
        };
        Ok(cfg)
    }

    /// Checks the pieces a task needs before anything is computed or written.
    pub fn validate(&self, task: &str) -> Result<()> {
        if let Some(t) = &self.task {
            if t != task {
                bail!("config declares task {t:?} but the {task:?} subcommand was run");
            }
        }
        let needs_generator = matches!(task, "analyze" | "spectrum" | "stability" | "sampling" | "gabor");
        if needs_generator && self.generator.is_none() {
            bail!("task {task:?} needs a [generator] block");
        }
        if matches!(task, "sampling" | "gabor") && self.lambda.is_none() {
            bail!("task {task:?} needs a [lambda] set");
        }
        if task == "vanisher" && self.vanisher.is_none() {
            bail!("task \"vanisher\" needs a [vanisher] block");
        }
        let p = &self.params;
        for (name, v) in [
            ("interior_margin", p.interior_margin),
            ("restore_density", p.restore_density),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    bail!("params.{name} must be positive, got {v}");
                }
            }
        }
        for (name, v) in [("grid", p.grid), ("x_grid", p.x_grid), ("t_count", p.t_count)] {
            if v == Some(0) {
                bail!("params.{name} must be positive");
            }
        }
        for (name, ws) in [("windows", &p.windows), ("gabor_windows", &p.gabor_windows)] {
            if let Some(ws) = ws {
                if ws.len() < 3 || ws.iter().any(|w| !(*w > 0.0)) || ws.windows(2).any(|w| w[1] <= w[0]) {
                    bail!("params.{name} must be at least three increasing positive radii");
                }
            }
        }
        if let (Some(a), Some(b)) = (p.t_min, p.t_max) {
            if !(a < b) {
                bail!("params.t_min must be below params.t_max");
            }
        }
        Ok(())
    }
}
