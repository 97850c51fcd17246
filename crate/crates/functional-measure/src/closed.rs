//! Closed forms evaluated by trapezoid quadrature: the Poisson generating
//! functional, its factorial moments and the oscillator matrix elements.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ensemble::PoissonEnsemble;
use crate::error::{MeasureError, Result};
use crate::testfn::{BoxDomain, TestFunctionGrid};

pub const QUADRATURE_TOLERANCE: f64 = 1e-8;
pub const MAX_REFINEMENTS: usize = 14;
/// Gaussian tails are cut at this many standard deviations.
pub const GAUSSIAN_COVERAGE: f64 = 8.0;

fn same_box(ens: &PoissonEnsemble, f: &TestFunctionGrid) -> Result<()> {
    if ens.domain() != f.domain() {
        return Err(MeasureError::Invalid("test function and ensemble live on different boxes".into()));
    }
    Ok(())
}

/// L(f) = exp(rho * int (e^{i f} - 1)).
pub fn poisson_closed_form(ens: &PoissonEnsemble, f: &TestFunctionGrid) -> Result<Complex64> {
    same_box(ens, f)?;
    let one = Complex64::new(1.0, 0.0);
    Ok((ens.intensity() * f.integrate(|_, v| Complex64::from_polar(1.0, v) - one)).exp())
}

/// (rho * int f)^n.
pub fn factorial_moment_closed_form(ens: &PoissonEnsemble, f: &TestFunctionGrid, n: usize) -> Result<f64> {
    same_box(ens, f)?;
    Ok((ens.intensity() * f.integral()).powi(n as i32))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Converged {
    pub value: Complex64,
    /// |value - previous| at the last refinement.
    pub change: f64,
    pub per_axis: usize,
}

/// Evaluates `at(n)` for n = start, 2 start - 1, ... (each grid nests the last)
/// until two successive values differ by at most `tol`.
pub fn refine_dyadic(start: usize, tol: f64, mut at: impl FnMut(usize) -> Result<Complex64>) -> Result<Converged> {
    let mut n = start.max(2);
    let mut prev = at(n)?;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        n = 2 * n - 1;
        let next = at(n)?;
        change = (next - prev).norm();
        prev = next;
        if change <= tol {
            return Ok(Converged { value: prev, change, per_axis: n });
        }
    }
    Err(MeasureError::NoConvergence { change, refinements: MAX_REFINEMENTS })
}

pub fn poisson_closed_form_converged(ens: &PoissonEnsemble, f: &dyn Fn(&[f64]) -> f64) -> Result<Converged> {
    let start = if ens.domain().dim() == 1 { 17 } else { 5 };
    refine_dyadic(start, QUADRATURE_TOLERANCE, |n| {
        poisson_closed_form(ens, &TestFunctionGrid::from_fn(ens.domain().clone(), n, f)?)
    })
}

/// Standard deviations of the density proportional to exp(-<c|omega c>), after
/// checking that omega is symmetric positive definite.
pub fn gaussian_widths(omega: &DMatrix<f64>) -> Result<Vec<f64>> {
    let m = omega.nrows();
    if m == 0 || omega.ncols() != m {
        return Err(MeasureError::Domain(format!("omega must be square, got {}x{}", m, omega.ncols())));
    }
    let scale = omega.amax().max(f64::MIN_POSITIVE);
    if (omega - omega.transpose()).amax() > 1e-12 * scale {
        return Err(MeasureError::Domain("omega must be symmetric".into()));
    }
    let min = omega.clone().symmetric_eigenvalues().min();
    if min < -1e-12 * scale {
        return Err(MeasureError::Domain(format!("omega is not positive semi-definite (eigenvalue {min})")));
    }
    if min <= 1e-12 * scale {
        return Err(MeasureError::Domain("omega is singular, the Gaussian weight is not integrable".into()));
    }
    let cov = (omega * 2.0).try_inverse().ok_or_else(|| MeasureError::Domain("omega is singular".into()))?;
    Ok((0..m).map(|a| cov[(a, a)].sqrt()).collect())
}

/// The centred box covering `GAUSSIAN_COVERAGE` standard deviations on each axis.
pub fn gaussian_box(omega: &DMatrix<f64>) -> Result<BoxDomain> {
    let widths = gaussian_widths(omega)?;
    BoxDomain::new(widths.iter().map(|s| (-GAUSSIAN_COVERAGE * s, GAUSSIAN_COVERAGE * s)).collect())
}

/// int e^{i f1(c) + i f2(c)} e^{-<c|omega c>} dc / (2 pi)^m over the grid box.
pub fn oscillator_matrix_element(omega: &DMatrix<f64>, f1: &TestFunctionGrid, f2: &TestFunctionGrid) -> Result<Complex64> {
    let widths = gaussian_widths(omega)?;
    let m = omega.nrows();
    if !(1..=2).contains(&m) {
        return Err(MeasureError::Invalid(format!("dimension {m} not in {{1, 2}}")));
    }
    if f1.domain() != f2.domain() || f1.shape() != f2.shape() || f1.domain().dim() != m {
        return Err(MeasureError::Invalid("f1 and f2 must share one grid of the oscillator dimension".into()));
    }
    for (a, (&(lo, hi), s)) in f1.domain().bounds().iter().zip(&widths).enumerate() {
        let need = (GAUSSIAN_COVERAGE * s) * (1.0 - 1e-12);
        if lo > -need || hi < need {
            return Err(MeasureError::Domain(format!(
                "axis {a}: box [{lo}, {hi}] does not cover {GAUSSIAN_COVERAGE} standard deviations ({s})"
            )));
        }
    }
    let norm = (2.0 * PI).powi(m as i32);
    let value = f1.combine(1.0, f2, 1.0)?.integrate(|x, phase| {
        let q: f64 = (0..m).map(|a| (0..m).map(|b| x[a] * omega[(a, b)] * x[b]).sum::<f64>()).sum();
        Complex64::from_polar((-q).exp(), phase)
    });
    Ok(value / norm)
}

pub fn oscillator_matrix_element_converged(
    omega: &DMatrix<f64>,
    f1: &dyn Fn(&[f64]) -> f64,
    f2: &dyn Fn(&[f64]) -> f64,
) -> Result<Converged> {
    let domain = gaussian_box(omega)?;
    let start = if omega.nrows() == 1 { 17 } else { 9 };
    refine_dyadic(start, QUADRATURE_TOLERANCE, |n| {
        let g1 = TestFunctionGrid::from_fn(domain.clone(), n, f1)?;
        let g2 = TestFunctionGrid::from_fn(domain.clone(), n, f2)?;
        oscillator_matrix_element(omega, &g1, &g2)
    })
}
