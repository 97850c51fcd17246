//! Positive definiteness of a characteristic functional: the matrix
//! G_jk = L(f_k - f_j) must be positive semi-definite.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{MeasureError, Result};
use crate::testfn::TestFunctionGrid;

pub const GRAM_CAP: usize = 12;
pub const CLOSED_FORM_FLOOR: f64 = -1e-9;
pub const MC_FLOOR_SIGMAS: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    /// Largest standard error among the entries; 0 for a closed-form functional.
    pub max_std_error: f64,
}

impl GramReport {
    pub fn floor(&self) -> f64 {
        if self.max_std_error == 0.0 {
            CLOSED_FORM_FLOOR
        } else {
            -MC_FLOOR_SIGMAS * self.max_std_error
        }
    }

    pub fn passes(&self) -> bool {
        self.min_eigenvalue >= self.floor()
    }
}

/// `functional` returns L(f) and its standard error (0 when exact). Only
/// entries with j < k are evaluated; the rest follow from L(-f) = conj L(f).
pub fn positive_definiteness_check(
    functional: &mut dyn FnMut(&TestFunctionGrid) -> Result<(Complex64, f64)>,
    fs: &[TestFunctionGrid],
) -> Result<GramReport> {
    let n = fs.len();
    if n == 0 {
        return Err(MeasureError::Invalid("no test functions".into()));
    }
    if n > GRAM_CAP {
        return Err(MeasureError::Capacity { what: "gram size", size: n, cap: GRAM_CAP });
    }
    let mut g = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    let mut max_std_error: f64 = 0.0;
    for j in 0..n {
        let (d, se) = functional(&fs[j].combine(1.0, &fs[j], -1.0)?)?;
        g[(j, j)] = Complex64::new(d.re, 0.0);
        max_std_error = max_std_error.max(se);
        for k in j + 1..n {
            let (v, se) = functional(&fs[k].combine(1.0, &fs[j], -1.0)?)?;
            g[(j, k)] = v;
            g[(k, j)] = v.conj();
            max_std_error = max_std_error.max(se);
        }
    }
    let mut eigenvalues: Vec<f64> = g.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(GramReport { min_eigenvalue: eigenvalues[0], eigenvalues, max_std_error })
}
