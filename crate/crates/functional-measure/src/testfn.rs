//! Real test functions sampled on a tensor grid over a box, with multilinear
//! interpolation and trapezoid quadrature.

use std::io::Read;

use num_complex::Complex64;

use crate::error::{MeasureError, Result};

pub const MIN_SAMPLES: usize = 16;

/// Axis-aligned box [lo_1, hi_1] x ... x [lo_m, hi_m].
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    bounds: Vec<(f64, f64)>,
}

impl BoxDomain {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(MeasureError::Invalid("box needs at least one axis".into()));
        }
        for &(lo, hi) in &bounds {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(MeasureError::Invalid(format!("axis [{lo}, {hi}] has no positive length")));
            }
        }
        Ok(Self { bounds })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    /// The cube [-half, half]^m.
    pub fn centered_cube(half: f64, m: usize) -> Result<Self> {
        Self::new(vec![(-half, half); m])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn volume(&self) -> f64 {
        self.bounds.iter().map(|(lo, hi)| hi - lo).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(&self.bounds).all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunctionGrid {
    domain: BoxDomain,
    shape: Vec<usize>,
    /// Row-major, last axis fastest.
    values: Vec<f64>,
}

impl TestFunctionGrid {
    pub fn from_values(domain: BoxDomain, shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if shape.len() != domain.dim() {
            return Err(MeasureError::Invalid(format!("{}-axis shape on a {}-dimensional box", shape.len(), domain.dim())));
        }
        if shape.iter().any(|&s| s < 2) {
            return Err(MeasureError::Invalid("every axis needs at least two samples".into()));
        }
        let total: usize = shape.iter().product();
        if total < MIN_SAMPLES {
            return Err(MeasureError::Invalid(format!("{total} samples, need at least {MIN_SAMPLES}")));
        }
        if values.len() != total {
            return Err(MeasureError::Invalid(format!("{} values for {total} nodes", values.len())));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(MeasureError::Invalid(format!("non-finite sample {v}")));
        }
        Ok(Self { domain, shape, values })
    }

    /// Samples `f` at `per_axis` equally spaced nodes (endpoints included) on every axis.
    pub fn from_fn(domain: BoxDomain, per_axis: usize, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let shape = vec![per_axis; domain.dim()];
        if per_axis < 2 {
            return Err(MeasureError::Invalid("every axis needs at least two samples".into()));
        }
        let total = per_axis.pow(domain.dim() as u32);
        let mut values = Vec::with_capacity(total);
        let mut x = vec![0.0; domain.dim()];
        for flat in 0..total {
            node_into(&domain, &shape, flat, &mut x);
            values.push(f(&x));
        }
        Self::from_values(domain, shape, values)
    }

    pub fn constant(domain: BoxDomain, per_axis: usize, c: f64) -> Result<Self> {
        Self::from_fn(domain, per_axis, |_| c)
    }

    /// Rows of `x, f(x)` on equally spaced, increasing nodes.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
        let mut xs = Vec::new();
        let mut fs = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(MeasureError::Invalid(format!("row {i}: expected x, f(x)")));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|e| MeasureError::Invalid(format!("row {i}: {s:?}: {e}")));
            xs.push(parse(&record[0])?);
            fs.push(parse(&record[1])?);
        }
        if xs.len() < 2 {
            return Err(MeasureError::Invalid("need at least two rows".into()));
        }
        let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        for (i, x) in xs.iter().enumerate() {
            if (x - (xs[0] + i as f64 * h)).abs() > 1e-9 * h.abs().max(1.0) {
                return Err(MeasureError::Invalid(format!("row {i}: nodes must be equally spaced and increasing")));
            }
        }
        let n = xs.len();
        Self::from_values(BoxDomain::interval(xs[0], xs[n - 1])?, vec![n], fs)
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        let (lo, hi) = self.domain.bounds[axis];
        (hi - lo) / (self.shape[axis] - 1) as f64
    }

    pub fn node(&self, flat: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.domain.dim()];
        node_into(&self.domain, &self.shape, flat, &mut x);
        x
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain || self.shape != other.shape {
            return Err(MeasureError::Invalid("test functions live on different grids".into()));
        }
        Ok(())
    }

    /// a * self + b * other.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Self::from_values(self.domain.clone(), self.shape.clone(), values)
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { values: self.values.iter().map(|v| a * v).collect(), ..self.clone() }
    }

    /// Multilinear interpolation; points outside the box are a domain error.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(MeasureError::Domain(format!("point {x:?} outside the box {:?}", self.domain.bounds)));
        }
        let m = self.domain.dim();
        let mut base = vec![0usize; m];
        let mut frac = vec![0.0; m];
        for a in 0..m {
            let (lo, _) = self.domain.bounds[a];
            let t = (x[a] - lo) / self.spacing(a);
            let i = (t.floor() as usize).min(self.shape[a] - 2);
            base[a] = i;
            frac[a] = t - i as f64;
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << m) {
            let mut w = 1.0;
            let mut flat = 0;
            for a in 0..m {
                let up = corner >> a & 1;
                w *= if up == 1 { frac[a] } else { 1.0 - frac[a] };
                flat = flat * self.shape[a] + base[a] + up;
            }
            if w != 0.0 {
                acc += w * self.values[flat];
            }
        }
        Ok(acc)
    }

    fn trapezoid_weight(&self, flat: usize) -> f64 {
        let mut w = 1.0;
        let mut rem = flat;
        for a in (0..self.domain.dim()).rev() {
            let i = rem % self.shape[a];
            rem /= self.shape[a];
            let edge = i == 0 || i == self.shape[a] - 1;
            w *= self.spacing(a) * if edge { 0.5 } else { 1.0 };
        }
        w
    }

    /// Trapezoid rule for the integral of g(x, f(x)) over the box.
    pub fn integrate(&self, g: impl Fn(&[f64], f64) -> Complex64) -> Complex64 {
        let mut x = vec![0.0; self.domain.dim()];
        let mut acc = Complex64::new(0.0, 0.0);
        for (flat, &v) in self.values.iter().enumerate() {
            node_into(&self.domain, &self.shape, flat, &mut x);
            acc += g(&x, v) * self.trapezoid_weight(flat);
        }
        acc
    }

    /// Trapezoid integral of f itself.
    pub fn integral(&self) -> f64 {
        self.integrate(|_, v| Complex64::new(v, 0.0)).re
    }
}

/// Five named smooth or piecewise-constant functions on `domain` (1-D), used
/// as a fixed reference family by the checks and the report tool.
pub fn reference_functions(domain: &BoxDomain, per_axis: usize) -> Result<Vec<(&'static str, TestFunctionGrid)>> {
    if domain.dim() != 1 {
        return Err(MeasureError::Invalid("reference functions are one-dimensional".into()));
    }
    let (lo, hi) = domain.bounds()[0];
    let len = hi - lo;
    let mid = 0.5 * (lo + hi);
    let family: [(&'static str, Box<dyn Fn(f64) -> f64>); 5] = [
        ("constant", Box::new(|_| 1.0)),
        ("gaussian-bump", Box::new(move |x| 2.0 * (-((x - mid) / (0.15 * len)).powi(2)).exp())),
        ("sine", Box::new(move |x| 1.5 * (2.0 * std::f64::consts::PI * (x - lo) / len).sin())),
        ("ramp", Box::new(move |x| 3.0 * (x - lo) / len)),
        ("cos-squared", Box::new(move |x| (std::f64::consts::PI * (x - lo) / len).cos().powi(2) - 0.5)),
    ];
    family
        .into_iter()
        .map(|(name, f)| Ok((name, TestFunctionGrid::from_fn(domain.clone(), per_axis, |x| f(x[0]))?)))
        .collect()
}

fn node_into(domain: &BoxDomain, shape: &[usize], flat: usize, x: &mut [f64]) {
    let mut rem = flat;
    for a in (0..shape.len()).rev() {
        let i = rem % shape[a];
        rem /= shape[a];
        let (lo, hi) = domain.bounds[a];
        x[a] = lo + (hi - lo) * i as f64 / (shape[a] - 1) as f64;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_reproduces_bilinear_functions() {
        let d = BoxDomain::new(vec![(0.0, 1.0), (-1.0, 2.0)]).unwrap();
        let f = |x: &[f64]| 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[0] * x[1];
        let g = TestFunctionGrid::from_fn(d, 5, f).unwrap();
        for p in [[0.3, 0.7], [1.0, 2.0], [0.0, -1.0], [0.61, -0.33]] {
            assert!((g.eval(&p).unwrap() - f(&p)).abs() < 1e-13);
        }
        assert!(matches!(g.eval(&[1.1, 0.0]), Err(MeasureError::Domain(_))));
    }

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let g = TestFunctionGrid::from_fn(BoxDomain::interval(0.0, 2.0).unwrap(), 17, |x| 3.0 * x[0] + 1.0).unwrap();
        assert!((g.integral() - 8.0).abs() < 1e-13);
        let c = TestFunctionGrid::constant(BoxDomain::centered_cube(1.0, 2).unwrap(), 4, 1.0).unwrap();
        assert!((c.integral() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn invariants_are_enforced() {
        let d = BoxDomain::interval(0.0, 1.0).unwrap();
        assert!(TestFunctionGrid::constant(d.clone(), 8, 1.0).is_err());
        assert!(TestFunctionGrid::from_fn(d.clone(), 20, |x| 1.0 / x[0]).is_err());
        assert!(BoxDomain::interval(1.0, 1.0).is_err());
        let a = TestFunctionGrid::constant(d.clone(), 20, 1.0).unwrap();
        let b = TestFunctionGrid::constant(d, 21, 1.0).unwrap();
        assert!(a.combine(1.0, &b, 1.0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let text: String = (0..17).map(|i| format!("{}, {}\n", i as f64 * 0.25, (i * i) as f64)).collect();
        let g = TestFunctionGrid::from_csv(text.as_bytes()).unwrap();
        assert_eq!(g.len(), 17);
        assert_eq!(g.domain().bounds(), &[(0.0, 4.0)]);
        assert!(TestFunctionGrid::from_csv("0,1\n0.5,1\n2,1\n".as_bytes()).is_err());
    }
}
