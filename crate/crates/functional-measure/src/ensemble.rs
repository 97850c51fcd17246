//! The Poisson point measure on a box: Poisson(rho * vol) points, i.i.d. uniform.
//!
//! Sampling is split into batches. Batch b draws from the ChaCha20 stream b of
//! the master seed, so any batch can be regenerated on its own.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{MeasureError, Result};
use crate::testfn::BoxDomain;

pub const BATCH_SIZE: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonEnsemble {
    intensity: f64,
    domain: BoxDomain,
    seed: u64,
}

/// Points c_1, ..., c_N in a box, stored flat and row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    coords: Vec<f64>,
    dim: usize,
}

impl PointConfiguration {
    pub fn new(coords: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(MeasureError::Invalid(format!("{} coordinates in dimension {dim}", coords.len())));
        }
        Ok(Self { coords, dim })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim)
    }
}

impl PoissonEnsemble {
    pub fn new(intensity: f64, domain: BoxDomain, seed: u64) -> Result<Self> {
        if !(intensity > 0.0 && intensity.is_finite()) {
            return Err(MeasureError::Invalid(format!("intensity must be positive, got {intensity}")));
        }
        let mean = intensity * domain.volume();
        if !(mean.is_finite() && mean < 1e9) {
            return Err(MeasureError::Invalid(format!("mean count {mean} out of range")));
        }
        Ok(Self { intensity, domain, seed })
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    /// rho * vol, the expected particle count.
    pub fn mean_count(&self) -> f64 {
        self.intensity * self.domain.volume()
    }

    pub fn batch_rng(&self, batch: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(batch);
        rng
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> PointConfiguration {
        let poisson = Poisson::new(self.mean_count()).expect("positive finite mean");
        let count = poisson.sample(rng) as usize;
        let m = self.domain.dim();
        let mut coords = Vec::with_capacity(count * m);
        for _ in 0..count {
            for &(lo, hi) in self.domain.bounds() {
                coords.push(lo + (hi - lo) * rng.random::<f64>());
            }
        }
        PointConfiguration { coords, dim: m }
    }

    /// Calls `f` on `n_samples` configurations, batch by batch.
    pub fn for_each_sample(&self, n_samples: usize, mut f: impl FnMut(&PointConfiguration)) {
        let mut left = n_samples;
        let mut batch = 0u64;
        while left > 0 {
            let mut rng = self.batch_rng(batch);
            for _ in 0..left.min(BATCH_SIZE) {
                f(&self.sample_with(&mut rng));
            }
            left = left.saturating_sub(BATCH_SIZE);
            batch += 1;
        }
    }
}

/// The first configuration of batch 0; a pure function of the ensemble and its seed.
pub fn sample_configuration(ens: &PoissonEnsemble) -> PointConfiguration {
    ens.sample_with(&mut ens.batch_rng(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(rho: f64, seed: u64) -> PoissonEnsemble {
        PoissonEnsemble::new(rho, BoxDomain::interval(0.0, 1.0).unwrap(), seed).unwrap()
    }

    #[test]
    fn deterministic_under_seed() {
        let e = unit(4.0, 99);
        assert_eq!(sample_configuration(&e), sample_configuration(&e));
        let mut a = Vec::new();
        let mut b = Vec::new();
        e.for_each_sample(5000, |c| a.push(c.clone()));
        e.for_each_sample(5000, |c| b.push(c.clone()));
        assert_eq!(a, b);
        let mut c = Vec::new();
        e.with_seed(100).for_each_sample(50, |s| c.push(s.clone()));
        assert_ne!(&a[..50], &c[..]);
    }

    #[test]
    fn points_stay_in_the_box() {
        let d = BoxDomain::new(vec![(-1.0, 1.0), (2.0, 3.0)]).unwrap();
        let e = PoissonEnsemble::new(3.0, d.clone(), 1).unwrap();
        e.for_each_sample(200, |c| assert!(c.points().all(|p| d.contains(p))));
    }

    #[test]
    fn rejects_bad_intensity() {
        let d = BoxDomain::interval(0.0, 1.0).unwrap();
        assert!(PoissonEnsemble::new(0.0, d.clone(), 0).is_err());
        assert!(PoissonEnsemble::new(f64::NAN, d, 0).is_err());
    }
}
