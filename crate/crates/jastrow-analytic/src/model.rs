use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{JastrowError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Circle(f64),
    FullLine,
}

/// N points in m dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleConfiguration {
    coords: Vec<f64>,
    dim: usize,
    pub domain: Domain,
    /// Overrides the default minimum separation (1e-6 l on a circle, 1e-6 on the line).
    pub min_sep: Option<f64>,
}

impl ParticleConfiguration {
    pub fn new(positions: &[Vec<f64>], domain: Domain) -> Result<Self> {
        let dim = positions.first().map_or(1, Vec::len);
        if dim == 0 || positions.iter().any(|p| p.len() != dim) {
            return Err(JastrowError::Invalid("positions must share one positive dimension".into()));
        }
        Self::from_flat(positions.concat(), dim, domain)
    }

    pub fn from_flat(coords: Vec<f64>, dim: usize, domain: Domain) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 || coords.is_empty() {
            return Err(JastrowError::Invalid(format!("{} coordinates do not split into {dim}-vectors", coords.len())));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(JastrowError::Invalid("non-finite coordinate".into()));
        }
        if let Domain::Circle(l) = domain {
            if !(l > 0.0 && l.is_finite()) {
                return Err(JastrowError::Invalid(format!("circle length {l}")));
            }
        }
        Ok(Self { coords, dim, domain, min_sep: None })
    }

    /// One-dimensional points on a circle of length `l`.
    pub fn circle(xs: &[f64], l: f64) -> Result<Self> {
        Self::from_flat(xs.to_vec(), 1, Domain::Circle(l))
    }

    /// One-dimensional points on the line.
    pub fn line(xs: &[f64]) -> Result<Self> {
        Self::from_flat(xs.to_vec(), 1, Domain::FullLine)
    }

    pub fn with_min_sep(mut self, min_sep: f64) -> Self {
        self.min_sep = Some(min_sep);
        self
    }

    pub fn n_particles(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn position(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        let coords = perm.iter().flat_map(|&j| self.position(j).iter().copied()).collect();
        Self { coords, ..self.clone() }
    }

    pub fn effective_min_sep(&self) -> f64 {
        self.min_sep.unwrap_or(match self.domain {
            Domain::Circle(l) => 1e-6 * l,
            Domain::FullLine => 1e-6,
        })
    }

    /// Distance between particles j and k (minimum image on a circle).
    pub fn separation(&self, j: usize, k: usize) -> f64 {
        let (a, b) = (self.position(j), self.position(k));
        match self.domain {
            Domain::Circle(l) => a
                .iter()
                .zip(b)
                .map(|(x, y)| {
                    let d = (x - y).rem_euclid(l);
                    d.min(l - d).powi(2)
                })
                .sum::<f64>()
                .sqrt(),
            Domain::FullLine => a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt(),
        }
    }

    pub fn check_separation(&self) -> Result<()> {
        let min_sep = self.effective_min_sep();
        let n = self.n_particles();
        for j in 0..n {
            for k in j + 1..n {
                let separation = self.separation(j, k);
                if separation < min_sep {
                    return Err(JastrowError::Singular { j, k, separation, min_sep });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum JastrowModel {
    /// Omega = prod_{j<k} |sin(pi (x_j - x_k) / l)|^beta on a circle.
    Cms { beta: f64, length: f64, n: usize },
    /// Omega = exp(-1/2 sum_j <x_j, omega x_j>) in m dimensions.
    OscillatoryExternal { omega: DMatrix<f64>, n: usize },
    /// Omega = prod_{j<k} |x_j - x_k|^beta on the line.
    CmsRational { beta: f64, n: usize },
}

impl JastrowModel {
    pub fn cms(beta: f64, length: f64, n: usize) -> Result<Self> {
        let m = JastrowModel::Cms { beta, length, n };
        m.validate()?;
        Ok(m)
    }

    pub fn oscillator(omega: DMatrix<f64>, n: usize) -> Result<Self> {
        let m = JastrowModel::OscillatoryExternal { omega, n };
        m.validate()?;
        Ok(m)
    }

    pub fn oscillator_1d(omega: f64, n: usize) -> Result<Self> {
        Self::oscillator(DMatrix::from_element(1, 1, omega), n)
    }

    pub fn rational(beta: f64, n: usize) -> Result<Self> {
        let m = JastrowModel::CmsRational { beta, n };
        m.validate()?;
        Ok(m)
    }

    pub fn n_particles(&self) -> usize {
        match self {
            JastrowModel::Cms { n, .. } | JastrowModel::OscillatoryExternal { n, .. } | JastrowModel::CmsRational { n, .. } => *n,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            JastrowModel::OscillatoryExternal { omega, .. } => omega.nrows(),
            _ => 1,
        }
    }

    /// Prefactor c of -c sum_j Laplacian_j in the model Hamiltonian.
    pub fn kinetic_coefficient(&self) -> f64 {
        match self {
            JastrowModel::OscillatoryExternal { .. } => 0.5,
            _ => 1.0,
        }
    }

    pub fn is_singular(&self) -> bool {
        !matches!(self, JastrowModel::OscillatoryExternal { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_particles() == 0 {
            return Err(JastrowError::Invalid("N must be at least 1".into()));
        }
        match self {
            JastrowModel::Cms { beta, length, .. } => {
                if !beta.is_finite() || !(*length > 0.0 && length.is_finite()) {
                    return Err(JastrowError::Invalid(format!("beta {beta}, length {length}")));
                }
            }
            JastrowModel::CmsRational { beta, .. } => {
                if !beta.is_finite() {
                    return Err(JastrowError::Invalid(format!("beta {beta}")));
                }
            }
            JastrowModel::OscillatoryExternal { omega, .. } => {
                if omega.nrows() == 0 || omega.nrows() != omega.ncols() {
                    return Err(JastrowError::Invalid("omega must be a non-empty square matrix".into()));
                }
                let scale = omega.amax().max(1.0);
                if (omega - omega.transpose()).amax() > 1e-12 * scale {
                    return Err(JastrowError::Invalid("omega must be symmetric".into()));
                }
                let min = omega.clone().symmetric_eigenvalues().min();
                if min < -1e-12 * scale {
                    return Err(JastrowError::Invalid(format!("omega must be positive semi-definite, min eigenvalue {min}")));
                }
            }
        }
        Ok(())
    }

    /// Checks size, dimension and domain of `config`, and separation for singular models.
    pub fn check(&self, config: &ParticleConfiguration) -> Result<()> {
        if config.n_particles() != self.n_particles() {
            return Err(JastrowError::Invalid(format!(
                "configuration has {} particles, model has {}",
                config.n_particles(),
                self.n_particles()
            )));
        }
        if config.dim() != self.dim() {
            return Err(JastrowError::Invalid(format!("configuration dimension {} vs model {}", config.dim(), self.dim())));
        }
        match (self, config.domain) {
            (JastrowModel::Cms { length, .. }, Domain::Circle(l)) if (l - length).abs() <= 1e-12 * length => {}
            (JastrowModel::Cms { .. }, _) => {
                return Err(JastrowError::Invalid("cms configurations live on a circle of the model length".into()))
            }
            (_, Domain::FullLine) => {}
            _ => return Err(JastrowError::Invalid("this model lives on the full line".into())),
        }
        if self.is_singular() {
            config.check_separation()?;
        }
        Ok(())
    }

    /// A random admissible configuration: uniform on the circle, or on [-3, 3]
    /// per coordinate on the line (scaled by the oscillator width when known).
    pub fn random_configuration<R: Rng + ?Sized>(&self, rng: &mut R) -> ParticleConfiguration {
        let n = self.n_particles();
        let m = self.dim();
        loop {
            let (coords, domain) = match self {
                JastrowModel::Cms { length, .. } => ((0..n).map(|_| rng.random::<f64>() * length).collect(), Domain::Circle(*length)),
                JastrowModel::OscillatoryExternal { .. } => {
                    ((0..n * m).map(|_| 3.0 * (2.0 * rng.random::<f64>() - 1.0)).collect(), Domain::FullLine)
                }
                JastrowModel::CmsRational { .. } => {
                    ((0..n).map(|_| 3.0 * (2.0 * rng.random::<f64>() - 1.0)).collect(), Domain::FullLine)
                }
            };
            let c = ParticleConfiguration::from_flat(coords, m, domain).expect("valid random configuration");
            if self.check(&c).is_ok() {
                return c;
            }
        }
    }
}

pub(crate) fn cms_wavenumber(length: f64) -> f64 {
    PI / length
}
