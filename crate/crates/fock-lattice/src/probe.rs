//! Smooth continuum wavefunctions sampled into a sector, and the weak operator
//! norm they define.
//!
//! A symmetric N-particle function f is mapped to the Fock vector with
//! coefficients sqrt(N!/prod n_i!) dx^{N/2} f(x_1, ..., x_N), so that the
//! Fock norm is the Riemann sum of the L2 norm of f.

use crate::sector::FockSector;
use crate::sparse::{SparseOperator, C64};

/// Fock vector of a symmetric function `f` of N positions (positions `i * dx`).
pub fn sample_symmetric(sector: &FockSector, f: &dyn Fn(&[f64]) -> C64) -> Vec<C64> {
    let n = sector.particle_count();
    let dx = sector.grid().spacing();
    let ln_fact = |k: usize| (1..=k).map(|j| (j as f64).ln()).sum::<f64>();
    let mut xs = Vec::with_capacity(n);
    sector
        .basis()
        .map(|occ| {
            xs.clear();
            let mut ln_den = 0.0;
            for (site, &k) in occ.iter().enumerate() {
                for _ in 0..k {
                    xs.push(sector.grid().coordinate(site));
                }
                ln_den += ln_fact(k as usize);
            }
            let weight = (0.5 * (ln_fact(n) - ln_den)).exp() * dx.powf(0.5 * n as f64);
            f(&xs) * weight
        })
        .collect()
}

pub fn normalize(v: &mut [C64]) -> f64 {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
    norm
}

/// A family of normalized probe vectors on one sector.
#[derive(Debug, Clone)]
pub struct ProbeSet {
    vectors: Vec<Vec<C64>>,
}

impl ProbeSet {
    pub fn from_functions(sector: &FockSector, functions: &[Box<dyn Fn(&[f64]) -> C64>]) -> Self {
        let vectors = functions
            .iter()
            .map(|f| {
                let mut v = sample_symmetric(sector, f.as_ref());
                normalize(&mut v);
                v
            })
            .filter(|v| v.iter().any(|z| z.norm() > 0.0))
            .collect();
        Self { vectors }
    }

    pub fn from_vectors(vectors: Vec<Vec<C64>>) -> Self {
        Self { vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    /// max_{a,b} |<u_a| op |u_b>|.
    pub fn weak_norm(&self, op: &SparseOperator) -> f64 {
        let images: Vec<Vec<C64>> = self.vectors.iter().map(|v| op.matvec(v)).collect();
        let mut best: f64 = 0.0;
        for u in &self.vectors {
            for w in &images {
                let z: C64 = u.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
                best = best.max(z.norm());
            }
        }
        best
    }
}
