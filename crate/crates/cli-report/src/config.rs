//! TOML suite configuration.
//!
//! ```toml
//! suite = "cms"
//! seed = 7
//! n_particles = 2
//! ladder = [16, 32, 64]
//! length = 6.283185307179586
//!
//! [params]
//! beta = 2.0
//!
//! [tolerances]
//! residual = 1e-9
//! order = 1.0
//!
//! [output]
//! report = "cms-report.json"
//! dir = "out"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::suites::SUITES;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub beta: Option<f64>,
    pub omega: Option<f64>,
    pub omega_bar: Option<f64>,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    /// Regularization sweep for the Coulomb-type suite, strictly decreasing.
    pub epsilons: Option<Vec<f64>>,
    /// Largest Fourier mode of the current-algebra probes.
    pub probe_modes: Option<i32>,
    /// Monte Carlo sample count.
    pub samples: Option<usize>,
    /// Poisson intensity.
    pub intensity: Option<f64>,
    /// Number of eigenvalues for `spectrum`.
    pub eigenvalues: Option<usize>,
    /// "model" (default) or "factorized", for `spectrum`.
    pub operator: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub residual: Option<f64>,
    pub order: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub report: Option<PathBuf>,
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: String,
    #[serde(default)]
    pub seed: u64,
    pub n_particles: Option<usize>,
    #[serde(default)]
    pub ladder: Vec<usize>,
    pub length: Option<f64>,
    #[serde(default)]
    pub params: ModelParams,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputPaths,
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: SuiteConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !SUITES.iter().any(|s| s.name == self.suite) {
            let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
            return Err(CliError::Config(format!("unknown suite {:?}; registry: {}", self.suite, names.join(", "))));
        }
        if self.ladder.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(format!("ladder {:?} must be strictly increasing", self.ladder)));
        }
        if self.ladder.first() == Some(&0) {
            return Err(CliError::Config("ladder entries must be positive".into()));
        }
        for (name, v) in [("residual", self.tolerances.residual), ("order", self.tolerances.order)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Config(format!("tolerance {name} = {v} must be positive")));
                }
            }
        }
        if let Some(l) = self.length {
            if !(l > 0.0 && l.is_finite()) {
                return Err(CliError::Config(format!("length = {l} must be positive")));
            }
        }
        let p = &self.params;
        for (name, v) in [("omega", p.omega), ("omega_bar", p.omega_bar), ("beta", p.beta), ("alpha", p.alpha)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(CliError::Config(format!("{name} = {v} must be finite")));
                }
            }
        }
        if let Some(e) = p.epsilon {
            if !(e > 0.0) {
                return Err(CliError::Config(format!("epsilon = {e} must be positive")));
            }
        }
        if let Some(i) = p.intensity {
            if !(i > 0.0) {
                return Err(CliError::Config(format!("intensity = {i} must be positive")));
            }
        }
        if let Some(op) = &p.operator {
            if op != "model" && op != "factorized" {
                return Err(CliError::Config(format!("operator {op:?} is not \"model\" or \"factorized\"")));
            }
        }
        Ok(())
    }

    pub fn residual_tolerance(&self, default: f64) -> f64 {
        self.tolerances.residual.unwrap_or(default)
    }

    pub fn order_threshold(&self, default: f64) -> f64 {
        self.tolerances.order.unwrap_or(default)
    }

    pub fn length_or(&self, default: f64) -> f64 {
        self.length.unwrap_or(default)
    }

    pub fn particles_or(&self, default: usize) -> usize {
        self.n_particles.unwrap_or(default)
    }

    pub fn ladder_or(&self, default: &[usize]) -> Vec<usize> {
        if self.ladder.is_empty() {
            default.to_vec()
        } else {
            self.ladder.clone()
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn report_path(&self) -> PathBuf {
        self.output.report.clone().unwrap_or_else(|| self.output_dir().join(format!("{}-report.json", self.suite)))
    }
}
