//! Two-point kernels phi(x, y) entering D(x) = K(x) - sum_y dx phi(x, y) :rho(x) rho(y):.

use std::f64::consts::PI;

use fock_lattice::LatticeGrid;

use crate::error::{FactorError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// (pi beta / l) cot(pi (x - y) / l).
    Cotangent { beta: f64, length: f64 },
    /// beta * theta(x - y - eps), with the plain coordinate difference.
    HeavisideShifted { beta: f64, epsilon: f64 },
    /// alpha * s(x - y; eps) on the minimum image.
    CoulombS { alpha: f64, epsilon: f64 },
    /// -omega_bar * (x - y) on the minimum image.
    LinearOmega { omega_bar: f64 },
}

impl KernelSpec {
    /// Shifted Heaviside with eps tied to the grid spacing.
    pub fn heaviside_on(grid: &LatticeGrid, beta: f64) -> Self {
        KernelSpec::HeavisideShifted { beta, epsilon: grid.spacing() }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(FactorError::Invalid(format!("{name} = {v}")))
            }
        };
        match *self {
            KernelSpec::Cotangent { beta, length } => {
                finite(beta, "beta")?;
                if !(length > 0.0 && length.is_finite()) {
                    return Err(FactorError::Invalid(format!("length = {length}")));
                }
            }
            KernelSpec::HeavisideShifted { beta, epsilon } => {
                finite(beta, "beta")?;
                positive(epsilon)?;
            }
            KernelSpec::CoulombS { alpha, epsilon } => {
                finite(alpha, "alpha")?;
                positive(epsilon)?;
            }
            KernelSpec::LinearOmega { omega_bar } => finite(omega_bar, "omega_bar")?,
        }
        Ok(())
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, KernelSpec::Cotangent { .. } | KernelSpec::CoulombS { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Cotangent { .. } => "cotangent",
            KernelSpec::HeavisideShifted { .. } => "heaviside-shifted",
            KernelSpec::CoulombS { .. } => "coulomb-s",
            KernelSpec::LinearOmega { .. } => "linear-omega",
        }
    }
}

fn positive(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(FactorError::Invalid(format!("epsilon must be positive, got {eps}")))
    }
}

/// s(d; eps) = d / (eps |d|^{1 - eps}), continuous with s(0) = 0.
pub fn coulomb_s(d: f64, epsilon: f64) -> f64 {
    if d == 0.0 {
        0.0
    } else {
        d.signum() * d.abs().powf(epsilon) / epsilon
    }
}

/// Value of the kernel at sites `x`, `y`. Singular kernels reject x == y.
pub fn kernel_eval(spec: &KernelSpec, grid: &LatticeGrid, x: usize, y: usize) -> Result<f64> {
    grid.check_site(x)?;
    grid.check_site(y)?;
    if x == y && spec.is_singular() {
        return Err(FactorError::Domain(format!("{} kernel at coincident site {x}", spec.name())));
    }
    Ok(match *spec {
        KernelSpec::Cotangent { beta, length } => {
            let d = grid.displacement(x, y);
            PI * beta / length / (PI * d / length).tan()
        }
        KernelSpec::HeavisideShifted { beta, epsilon } => {
            let d = grid.displacement(x, y);
            if d - epsilon > 1e-12 * grid.length() {
                beta
            } else {
                0.0
            }
        }
        KernelSpec::CoulombS { alpha, epsilon } => alpha * coulomb_s(grid.minimum_image(x, y), epsilon),
        KernelSpec::LinearOmega { omega_bar } => -omega_bar * grid.minimum_image(x, y),
    })
}
