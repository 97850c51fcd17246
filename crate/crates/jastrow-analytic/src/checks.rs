//! Finite-difference cross-checks of the analytic derivatives, and statistics
//! of the local energy over random configurations.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{JastrowError, Result};
use crate::eval::{drift, laplacian_log_psi, local_energy, log_psi};
use crate::model::{JastrowModel, ParticleConfiguration};

pub const DRIFT_FD_STEP: f64 = 1e-5;
pub const LAPLACIAN_FD_STEP: f64 = 1e-3;

/// |a - b| relative to max(|a|, 1).
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeEntry {
    pub particle: usize,
    pub component: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    pub step: f64,
    pub entries: Vec<DerivativeEntry>,
}

impl DerivativeReport {
    pub fn worst(&self) -> f64 {
        self.entries.iter().map(|e| e.relative).fold(0.0, f64::max)
    }
}

fn shifted(config: &ParticleConfiguration, idx: usize, h: f64) -> ParticleConfiguration {
    let mut c = config.clone();
    c.coords_mut()[idx] += h;
    c
}

fn require_clearance(config: &ParticleConfiguration, model: &JastrowModel, clearance: f64) -> Result<()> {
    if !model.is_singular() {
        return Ok(());
    }
    let n = config.n_particles();
    for j in 0..n {
        for k in j + 1..n {
            let separation = config.separation(j, k);
            if separation < clearance {
                return Err(JastrowError::Singular { j, k, separation, min_sep: clearance });
            }
        }
    }
    Ok(())
}

/// Analytic drift against a central difference of `log_psi` with step 1e-5.
/// Singular models need every pair 1000 steps apart: the O(h^2 / d^2)
/// truncation error then stays below 1e-6.
pub fn finite_diff_drift_check(model: &JastrowModel, config: &ParticleConfiguration) -> Result<DerivativeReport> {
    let h = DRIFT_FD_STEP;
    require_clearance(config, model, 1000.0 * h)?;
    let m = config.dim();
    let mut entries = Vec::new();
    for j in 0..config.n_particles() {
        let g = drift(model, config, j)?;
        for (a, &analytic) in g.iter().enumerate() {
            let idx = j * m + a;
            let numeric =
                (log_psi(model, &shifted(config, idx, h))? - log_psi(model, &shifted(config, idx, -h))?) / (2.0 * h);
            entries.push(DerivativeEntry { particle: j, component: a, analytic, numeric, relative: relative_error(analytic, numeric) });
        }
    }
    Ok(DerivativeReport { step: h, entries })
}

/// Analytic Laplacian of `log_psi` per particle against the five-point stencil
/// with step 1e-3 in each coordinate. `component` is 0 for every entry.
pub fn finite_diff_laplacian_check(model: &JastrowModel, config: &ParticleConfiguration) -> Result<DerivativeReport> {
    let h = LAPLACIAN_FD_STEP;
    require_clearance(config, model, 100.0 * h)?;
    let m = config.dim();
    let f0 = log_psi(model, config)?;
    let mut entries = Vec::new();
    for j in 0..config.n_particles() {
        let analytic = laplacian_log_psi(model, config, j)?;
        let mut numeric = 0.0;
        for a in 0..m {
            let idx = j * m + a;
            let f = |s: f64| log_psi(model, &shifted(config, idx, s * h));
            numeric += (-f(2.0)? + 16.0 * f(1.0)? - 30.0 * f0 + 16.0 * f(-1.0)? - f(-2.0)?) / (12.0 * h * h);
        }
        entries.push(DerivativeEntry { particle: j, component: 0, analytic, numeric, relative: relative_error(analytic, numeric) });
    }
    Ok(DerivativeReport { step: h, entries })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyStatistics {
    pub samples: usize,
    pub mean: f64,
    pub std_dev: f64,
    /// max |E_loc - reference| / |reference| (absolute when the reference is 0).
    pub max_deviation: f64,
}

impl EnergyStatistics {
    pub fn relative_spread(&self) -> f64 {
        if self.mean == 0.0 {
            self.std_dev
        } else {
            self.std_dev / self.mean.abs()
        }
    }
}

pub fn energy_statistics(energies: &[f64], reference: f64) -> Result<EnergyStatistics> {
    if energies.is_empty() {
        return Err(JastrowError::Invalid("no energies".into()));
    }
    let n = energies.len() as f64;
    let mean = energies.iter().sum::<f64>() / n;
    let var = if energies.len() > 1 { energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    let scale = if reference == 0.0 { 1.0 } else { reference.abs() };
    let max_deviation = energies.iter().map(|e| (e - reference).abs() / scale).fold(0.0, f64::max);
    Ok(EnergyStatistics { samples: energies.len(), mean, std_dev: var.sqrt(), max_deviation })
}

/// Local energies at `samples` random admissible configurations.
pub fn sample_local_energies<R: Rng + ?Sized>(model: &JastrowModel, samples: usize, rng: &mut R) -> Result<Vec<f64>> {
    (0..samples).map(|_| local_energy(model, &model.random_configuration(rng))).collect()
}

/// Energy density rho^3 / 3 of the rational model at density rho.
pub fn rational_energy_density(rho_bar: f64) -> f64 {
    rho_bar.powi(3) / 3.0
}

/// E_N / l for the periodic model at the circle length l = N / (pi rho).
pub fn cms_energy_per_length(n: u64, beta: f64, rho_bar: f64) -> Result<f64> {
    if n == 0 || !(rho_bar > 0.0) {
        return Err(JastrowError::Invalid(format!("need N >= 1 and rho > 0, got N={n}, rho={rho_bar}")));
    }
    let nf = n as f64;
    let l = nf / (PI * rho_bar);
    Ok((PI * beta / l).powi(2) * nf * (nf * nf - 1.0) / 3.0 / l)
}
