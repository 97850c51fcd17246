use crate::error::{CheckError, Result};

/// Residuals measured on a sequence of refined grids.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub spacings: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Least-squares slope of log(residual) against log(spacing); `None` when
    /// some residual is exactly zero or fewer than two levels were measured.
    pub fitted_order: Option<f64>,
}

impl ConvergenceRecord {
    pub fn new(spacings: Vec<f64>, residuals: Vec<f64>) -> Result<Self> {
        if spacings.len() != residuals.len() {
            return Err(CheckError::Invalid(format!(
                "{} spacings vs {} residuals",
                spacings.len(),
                residuals.len()
            )));
        }
        if spacings.windows(2).any(|w| w[1] >= w[0]) {
            return Err(CheckError::Invalid("spacings must be strictly decreasing".into()));
        }
        if residuals.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(CheckError::Invalid("residuals must be finite and non-negative".into()));
        }
        let fitted_order = fit_order(&spacings, &residuals);
        Ok(Self { spacings, residuals, fitted_order })
    }

    /// Every residual is exactly zero.
    pub fn is_exact(&self) -> bool {
        !self.residuals.is_empty() && self.residuals.iter().all(|&r| r == 0.0)
    }

    pub fn is_monotone_decreasing(&self) -> bool {
        self.residuals.windows(2).all(|w| w[1] < w[0])
    }

    /// Exact, or fitted order at least `threshold`.
    pub fn meets_order(&self, threshold: f64) -> bool {
        self.is_exact() || self.fitted_order.is_some_and(|p| p >= threshold)
    }
}

pub fn fit_order(spacings: &[f64], residuals: &[f64]) -> Option<f64> {
    if spacings.len() < 2 || residuals.iter().any(|&r| r <= 0.0) {
        return None;
    }
    let xs: Vec<f64> = spacings.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}
