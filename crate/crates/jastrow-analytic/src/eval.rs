//! Analytic log|Omega|, its gradient and Laplacian, and the local energy
//! (H Omega) / Omega = -c sum_j (Lap_j ln|Omega| + |grad_j ln|Omega||^2) + V.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{JastrowError, Result};
use crate::model::{cms_wavenumber, JastrowModel, ParticleConfiguration};

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| (j + 1..n).map(move |k| (j, k)))
}

fn x(config: &ParticleConfiguration, j: usize) -> f64 {
    config.position(j)[0]
}

pub fn log_psi(model: &JastrowModel, config: &ParticleConfiguration) -> Result<f64> {
    model.check(config)?;
    let n = config.n_particles();
    Ok(match model {
        JastrowModel::Cms { beta, length, .. } => {
            let q = cms_wavenumber(*length);
            beta * pairs(n).map(|(j, k)| (q * (x(config, j) - x(config, k))).sin().abs().ln()).sum::<f64>()
        }
        JastrowModel::OscillatoryExternal { omega, .. } => {
            let m = config.dim();
            -0.5 * (0..n)
                .map(|j| {
                    let p = config.position(j);
                    (0..m).map(|a| (0..m).map(|b| p[a] * omega[(a, b)] * p[b]).sum::<f64>()).sum::<f64>()
                })
                .sum::<f64>()
        }
        JastrowModel::CmsRational { beta, .. } => {
            beta * pairs(n).map(|(j, k)| (x(config, j) - x(config, k)).abs().ln()).sum::<f64>()
        }
    })
}

/// grad_j ln|Omega|.
pub fn drift(model: &JastrowModel, config: &ParticleConfiguration, j: usize) -> Result<Vec<f64>> {
    model.check(config)?;
    let n = config.n_particles();
    if j >= n {
        return Err(JastrowError::Invalid(format!("particle {j} of {n}")));
    }
    Ok(match model {
        JastrowModel::Cms { beta, length, .. } => vec![cms_cot_sum(*beta, *length, config, j)],
        JastrowModel::OscillatoryExternal { omega, .. } => {
            let p = config.position(j);
            let m = p.len();
            (0..m).map(|a| -(0..m).map(|b| omega[(a, b)] * p[b]).sum::<f64>()).collect()
        }
        JastrowModel::CmsRational { beta, .. } => {
            vec![beta * (0..n).filter(|&k| k != j).map(|k| 1.0 / (x(config, j) - x(config, k))).sum::<f64>()]
        }
    })
}

/// (pi beta / l) sum_{k != j} cot(pi (x_j - x_k) / l).
fn cms_cot_sum(beta: f64, length: f64, config: &ParticleConfiguration, j: usize) -> f64 {
    let q = cms_wavenumber(length);
    q * beta
        * (0..config.n_particles())
            .filter(|&k| k != j)
            .map(|k| 1.0 / (q * (x(config, j) - x(config, k))).tan())
            .sum::<f64>()
}

/// Lap_j ln|Omega|.
pub fn laplacian_log_psi(model: &JastrowModel, config: &ParticleConfiguration, j: usize) -> Result<f64> {
    model.check(config)?;
    let n = config.n_particles();
    if j >= n {
        return Err(JastrowError::Invalid(format!("particle {j} of {n}")));
    }
    Ok(match model {
        JastrowModel::Cms { beta, length, .. } => {
            let q = cms_wavenumber(*length);
            -q * q * beta
                * (0..n).filter(|&k| k != j).map(|k| 1.0 / (q * (x(config, j) - x(config, k))).sin().powi(2)).sum::<f64>()
        }
        JastrowModel::OscillatoryExternal { omega, .. } => -omega.trace(),
        JastrowModel::CmsRational { beta, .. } => {
            -beta * (0..n).filter(|&k| k != j).map(|k| 1.0 / (x(config, j) - x(config, k)).powi(2)).sum::<f64>()
        }
    })
}

/// The potential of the model Hamiltonian at `config`.
pub fn potential(model: &JastrowModel, config: &ParticleConfiguration) -> Result<f64> {
    model.check(config)?;
    let n = config.n_particles();
    Ok(match model {
        JastrowModel::Cms { beta, length, .. } => {
            let q = cms_wavenumber(*length);
            2.0 * q * q * beta * (beta - 1.0)
                * pairs(n).map(|(j, k)| 1.0 / (q * (x(config, j) - x(config, k))).sin().powi(2)).sum::<f64>()
        }
        JastrowModel::OscillatoryExternal { omega, .. } => {
            let w2 = omega * omega;
            let m = config.dim();
            0.5 * (0..n)
                .map(|j| {
                    let p = config.position(j);
                    (0..m).map(|a| (0..m).map(|b| p[a] * w2[(a, b)] * p[b]).sum::<f64>()).sum::<f64>()
                })
                .sum::<f64>()
        }
        JastrowModel::CmsRational { beta, .. } => {
            2.0 * beta * (beta - 1.0) * pairs(n).map(|(j, k)| 1.0 / (x(config, j) - x(config, k)).powi(2)).sum::<f64>()
        }
    })
}

pub fn local_energy(model: &JastrowModel, config: &ParticleConfiguration) -> Result<f64> {
    let c = model.kinetic_coefficient();
    let mut kinetic = 0.0;
    for j in 0..config.n_particles() {
        let g = drift(model, config, j)?;
        kinetic += laplacian_log_psi(model, config, j)? + g.iter().map(|v| v * v).sum::<f64>();
    }
    Ok(-c * kinetic + potential(model, config)?)
}

/// Closed-form ground-state energy: E_N for CMS, (N/2) tr omega for the
/// oscillator, 0 for the rational model (its Jastrow factor is annihilated).
pub fn groundstate_energy(model: &JastrowModel) -> f64 {
    let n = model.n_particles() as f64;
    match model {
        JastrowModel::Cms { beta, length, .. } => (PI * beta / length).powi(2) * n * (n * n - 1.0) / 3.0,
        JastrowModel::OscillatoryExternal { omega, .. } => 0.5 * n * omega.trace(),
        JastrowModel::CmsRational { .. } => 0.0,
    }
}

/// d/dx_j ln Omega by complex-step differentiation of the analytic continuation
/// (beta/2) sum ln sin^2(pi (x_j - x_k)/l), which is exact up to rounding.
pub fn complex_step_drift(model: &JastrowModel, config: &ParticleConfiguration, j: usize) -> Result<f64> {
    let JastrowModel::Cms { beta, length, .. } = model else {
        return Err(JastrowError::Unsupported("complex-step drift is implemented for the periodic model"));
    };
    model.check(config)?;
    let h = 1e-30;
    let q = cms_wavenumber(*length);
    let xj = Complex64::new(x(config, j), h);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (0..config.n_particles()).filter(|&k| k != j) {
        let s = (q * (xj - x(config, k))).sin();
        acc += (s * s).ln();
    }
    Ok(0.5 * beta * acc.im / h)
}

/// (D_j Omega) / Omega = d_j ln Omega - (pi beta / l) sum_{k != j} cot(pi (x_j - x_k) / l).
pub fn dunkl_apply(model: &JastrowModel, config: &ParticleConfiguration, j: usize) -> Result<f64> {
    let JastrowModel::Cms { beta, length, .. } = model else {
        return Err(JastrowError::Unsupported("Dunkl-type operators are defined for the periodic model"));
    };
    if j >= config.n_particles() {
        return Err(JastrowError::Invalid(format!("particle {j} of {}", config.n_particles())));
    }
    Ok(complex_step_drift(model, config, j)? - cms_cot_sum(*beta, *length, config, j))
}
