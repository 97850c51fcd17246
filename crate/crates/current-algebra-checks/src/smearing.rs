//! Sampled test functions and the smeared density and current operators.

use fock_lattice::{FieldSet, FockSector, LatticeGrid, SparseOperator, C64};

use crate::error::{CheckError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SmearingFunction {
    pub values: Vec<C64>,
    pub description: String,
}

impl SmearingFunction {
    pub fn new(values: Vec<C64>, description: impl Into<String>) -> Self {
        Self { values, description: description.into() }
    }

    pub fn from_real(values: &[f64], description: impl Into<String>) -> Self {
        Self::new(values.iter().map(|&v| C64::new(v, 0.0)).collect(), description)
    }

    /// Samples `f` at the site coordinates `i * dx`.
    pub fn sample(grid: &LatticeGrid, f: impl Fn(f64) -> f64, description: impl Into<String>) -> Self {
        let values = (0..grid.n_sites()).map(|i| C64::new(f(grid.coordinate(i)), 0.0)).collect();
        Self::new(values, description)
    }

    pub fn constant(grid: &LatticeGrid, c: f64) -> Self {
        Self::sample(grid, |_| c, format!("const {c}"))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    fn check(&self, n_sites: usize) -> Result<()> {
        if self.values.len() != n_sites {
            return Err(CheckError::LengthMismatch { got: self.values.len(), expected: n_sites });
        }
        Ok(())
    }

    /// Periodic central difference.
    pub fn derivative(&self, grid: &LatticeGrid) -> Result<Self> {
        self.check(grid.n_sites())?;
        let n = grid.n_sites() as isize;
        let h = grid.spacing();
        let values = (0..n)
            .map(|i| (self.values[grid.wrap(i + 1)] - self.values[grid.wrap(i - 1)]) / (2.0 * h))
            .collect();
        Ok(Self::new(values, format!("d({})", self.description)))
    }

    pub fn pointwise_product(&self, other: &Self) -> Result<Self> {
        other.check(self.len())?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(Self::new(values, format!("{}*{}", self.description, other.description)))
    }
}

/// rho(f) = sum_i f_i n_i.
pub fn smear_density(sector: &FockSector, f: &SmearingFunction) -> Result<SparseOperator> {
    f.check(sector.n_sites())?;
    let diag: Vec<C64> = sector
        .basis()
        .map(|occ| occ.iter().zip(&f.values).map(|(&k, v)| v * k as f64).sum())
        .collect();
    Ok(SparseOperator::from_diagonal(&diag))
}

/// J(g) = sum_i g_i J_i dx, with the central-stencil current.
pub fn smear_current(sector: &FockSector, g: &SmearingFunction) -> Result<SparseOperator> {
    g.check(sector.n_sites())?;
    let fields = FieldSet::new(sector)?;
    Ok(smear_current_with(&fields, sector, g))
}

pub(crate) fn smear_current_with(fields: &FieldSet, sector: &FockSector, g: &SmearingFunction) -> SparseOperator {
    let dx = sector.grid().spacing();
    let mut acc = SparseOperator::zeros(sector.dim(), sector.dim());
    for (i, gi) in g.values.iter().enumerate() {
        if *gi != C64::new(0.0, 0.0) {
            acc = acc.add_scaled(&fields.current(i), gi * dx);
        }
    }
    acc
}

/// [g1, g2] = g1 g2' - g2 g1' with central differences.
pub fn field_bracket(g1: &SmearingFunction, g2: &SmearingFunction, grid: &LatticeGrid) -> Result<SmearingFunction> {
    let d1 = g1.derivative(grid)?;
    let d2 = g2.derivative(grid)?;
    let values = (0..grid.n_sites())
        .map(|i| g1.values[i] * d2.values[i] - g2.values[i] * d1.values[i])
        .collect();
    Ok(SmearingFunction::new(values, format!("[{}, {}]", g1.description, g2.description)))
}
