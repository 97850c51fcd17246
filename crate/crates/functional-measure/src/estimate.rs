//! Monte Carlo estimates over the Poisson ensemble.

use num_complex::Complex64;

use crate::ensemble::{PoissonEnsemble, PointConfiguration};
use crate::error::{MeasureError, Result};
use crate::testfn::TestFunctionGrid;

pub const MIN_MC_SAMPLES: usize = 1000;
pub const MOMENT_ORDER_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: Complex64,
    /// Sample standard deviation of |z - mean| over sqrt(n_samples).
    pub std_error: f64,
    pub n_samples: usize,
}

impl MCEstimate {
    /// |mean - target| in units of the standard error (0 when both agree exactly).
    pub fn deviation_sigmas(&self, target: Complex64) -> f64 {
        let d = (self.mean - target).norm();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }

    pub fn within(&self, target: Complex64, sigmas: f64) -> bool {
        self.deviation_sigmas(target) <= sigmas
    }
}

/// Welford accumulator for complex samples.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    n: usize,
    mean: Complex64,
    m2: f64,
}

impl Accumulator {
    fn push(&mut self, z: Complex64) {
        self.n += 1;
        let delta = z - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += (delta.conj() * (z - self.mean)).re;
    }

    fn finish(self) -> MCEstimate {
        let var = if self.n > 1 { self.m2.max(0.0) / (self.n - 1) as f64 } else { 0.0 };
        MCEstimate { mean: self.mean, std_error: (var / self.n as f64).sqrt(), n_samples: self.n }
    }
}

/// eta(f) = sum_j f(c_j).
pub fn eta_pairing(config: &PointConfiguration, f: &TestFunctionGrid) -> Result<f64> {
    config.points().map(|p| f.eval(p)).sum()
}

fn check_compatible(ens: &PoissonEnsemble, f: &TestFunctionGrid, n_samples: usize) -> Result<()> {
    if n_samples < MIN_MC_SAMPLES {
        return Err(MeasureError::Invalid(format!("{n_samples} samples, need at least {MIN_MC_SAMPLES}")));
    }
    if ens.domain() != f.domain() {
        return Err(MeasureError::Invalid("test function and ensemble live on different boxes".into()));
    }
    Ok(())
}

/// Estimate of L(f) = E exp(i eta(f)).
pub fn characteristic_functional_mc(ens: &PoissonEnsemble, f: &TestFunctionGrid, n_samples: usize) -> Result<MCEstimate> {
    check_compatible(ens, f, n_samples)?;
    let mut acc = Accumulator::default();
    let mut err = None;
    ens.for_each_sample(n_samples, |c| match eta_pairing(c, f) {
        Ok(eta) => acc.push(Complex64::from_polar(1.0, eta)),
        Err(e) => err = Some(e),
    });
    match err {
        Some(e) => Err(e),
        None => Ok(acc.finish()),
    }
}

/// e_n(v), the elementary symmetric polynomial of degree n.
pub fn elementary_symmetric(values: &[f64], n: usize) -> f64 {
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for &v in values {
        for k in (1..=n).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e[n]
}

/// Estimate of E sum over distinct j_1, ..., j_n of prod f(c_{j_i}) = n! e_n.
pub fn normal_ordered_moment_mc(ens: &PoissonEnsemble, f: &TestFunctionGrid, n: usize, n_samples: usize) -> Result<MCEstimate> {
    if n > MOMENT_ORDER_CAP {
        return Err(MeasureError::Capacity { what: "moment order", size: n, cap: MOMENT_ORDER_CAP });
    }
    check_compatible(ens, f, n_samples)?;
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let mut acc = Accumulator::default();
    let mut err = None;
    let mut buf = Vec::new();
    ens.for_each_sample(n_samples, |c| {
        buf.clear();
        for p in c.points() {
            match f.eval(p) {
                Ok(v) => buf.push(v),
                Err(e) => err = Some(e),
            }
        }
        acc.push(Complex64::new(factorial * elementary_symmetric(&buf, n), 0.0));
    });
    match err {
        Some(e) => Err(e),
        None => Ok(acc.finish()),
    }
}
