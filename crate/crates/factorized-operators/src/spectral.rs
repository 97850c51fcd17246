//! Lowest eigenpairs of Hermitian sparse operators.
//!
//! Small problems go to a dense Hermitian eigensolver. Larger ones use a
//! restarted Krylov/Rayleigh-Ritz iteration with full reorthogonalization:
//! the basis is grown block-wise from a few random vectors (so degenerate
//! eigenvalues are resolved), Ritz pairs are extracted, and on restart the
//! lowest Ritz vectors are kept and the residuals of unconverged pairs seed
//! the next expansion. Every returned pair is certified by
//! ||A v - lambda v|| <= 1e-8 ||A||.

use std::collections::VecDeque;

use fock_lattice::{SparseOperator, C64};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FactorError, Result};

pub const DENSE_LIMIT: usize = 2000;
pub const CERTIFY_TOLERANCE: f64 = 1e-8;
const HERMITIAN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    Dense,
    Iterative,
}

impl SolverMethod {
    pub fn label(&self) -> &'static str {
        match self {
            SolverMethod::Dense => "dense",
            SolverMethod::Iterative => "iterative",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<C64>>>,
    pub method: SolverMethod,
    pub residual_norms: Vec<f64>,
    /// Upper bound on ||A|| used for certification (max absolute row sum).
    pub operator_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterativeOptions {
    pub subspace: usize,
    pub max_restarts: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for IterativeOptions {
    fn default() -> Self {
        Self { subspace: 0, max_restarts: 400, tolerance: 1e-10, seed: 0x5eed }
    }
}

/// Row-sum norm, an upper bound on the spectral norm.
pub fn row_sum_norm(a: &SparseOperator) -> f64 {
    (0..a.rows()).map(|r| a.row(r).map(|(_, v)| v.norm()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn check_hermitian(a: &SparseOperator) -> Result<()> {
    if a.rows() != a.cols() {
        return Err(FactorError::Invalid(format!("eigensolve of {}x{} operator", a.rows(), a.cols())));
    }
    let defect = a.hermiticity_defect();
    let scale = a.max_abs();
    if defect > HERMITIAN_TOLERANCE * scale.max(1.0) {
        return Err(FactorError::NotHermitian { defect, scale });
    }
    Ok(())
}

/// The `k` lowest eigenpairs, choosing the dense path below [`DENSE_LIMIT`].
pub fn eigensolve(a: &SparseOperator, k: usize) -> Result<SpectralResult> {
    if a.rows() < DENSE_LIMIT {
        eigensolve_dense(a, k)
    } else {
        eigensolve_iterative(a, k, &IterativeOptions::default())
    }
}

/// All eigenvalues, ascending, by dense diagonalization.
pub fn dense_spectrum(a: &SparseOperator) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let (vals, _) = dense_eigen(a, false);
    Ok(vals)
}

fn dense_eigen(a: &SparseOperator, vectors: bool) -> (Vec<f64>, Option<DMatrix<C64>>) {
    let n = a.rows();
    let real = a.iter().all(|(_, _, v)| v.im == 0.0);
    let (vals, vecs): (Vec<f64>, Option<DMatrix<C64>>) = if real {
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (r, c, v) in a.iter() {
            m[(r, c)] = v.re;
        }
        let m = (&m + m.transpose()) * 0.5;
        if vectors {
            let e = SymmetricEigen::new(m);
            (e.eigenvalues.iter().copied().collect(), Some(e.eigenvectors.map(|x| C64::new(x, 0.0))))
        } else {
            (m.symmetric_eigenvalues().iter().copied().collect(), None)
        }
    } else {
        let d = a.hermitian_part().to_dense();
        if vectors {
            let e = SymmetricEigen::new(d);
            (e.eigenvalues.iter().copied().collect(), Some(e.eigenvectors))
        } else {
            (d.symmetric_eigenvalues().iter().copied().collect(), None)
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let vecs = vecs.map(|v| DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]));
    (sorted, vecs)
}

pub fn eigensolve_dense(a: &SparseOperator, k: usize) -> Result<SpectralResult> {
    check_hermitian(a)?;
    let n = a.rows();
    let k = k.min(n);
    if k == 0 {
        return Err(FactorError::Invalid("k must be at least 1 and the operator non-empty".into()));
    }
    let (vals, vecs) = dense_eigen(a, true);
    let vecs = vecs.expect("vectors requested");
    let vectors: Vec<Vec<C64>> = (0..k).map(|c| vecs.column(c).iter().copied().collect()).collect();
    certify(a, vals[..k].to_vec(), vectors, SolverMethod::Dense)
}

fn certify(a: &SparseOperator, eigenvalues: Vec<f64>, vectors: Vec<Vec<C64>>, method: SolverMethod) -> Result<SpectralResult> {
    let norm = row_sum_norm(a);
    let residual_norms: Vec<f64> = eigenvalues.iter().zip(&vectors).map(|(&l, v)| residual(a, l, v)).collect();
    let worst = residual_norms.iter().copied().fold(0.0, f64::max);
    if worst > CERTIFY_TOLERANCE * norm.max(f64::MIN_POSITIVE) {
        return Err(FactorError::NoConvergence {
            iterations: 0,
            converged: residual_norms.iter().filter(|&&r| r <= CERTIFY_TOLERANCE * norm).count(),
            wanted: eigenvalues.len(),
            worst_residual: worst,
        });
    }
    Ok(SpectralResult { eigenvalues, eigenvectors: Some(vectors), method, residual_norms, operator_norm: norm })
}

fn residual(a: &SparseOperator, lambda: f64, v: &[C64]) -> f64 {
    a.matvec(v).iter().zip(v).map(|(av, x)| (av - x * lambda).norm_sqr()).sum::<f64>().sqrt()
}

fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthogonalizes `w` against `basis` twice and normalizes; None if it collapses.
fn orthonormalize(w: &mut [C64], basis: &[Vec<C64>]) -> Option<()> {
    let before = norm(w);
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, w);
            for (x, y) in w.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let after = norm(w);
    if after <= 1e-10 * before.max(f64::MIN_POSITIVE) || after == 0.0 {
        return None;
    }
    for x in w.iter_mut() {
        *x /= after;
    }
    Some(())
}

pub fn eigensolve_iterative(a: &SparseOperator, k: usize, opts: &IterativeOptions) -> Result<SpectralResult> {
    check_hermitian(a)?;
    let n = a.rows();
    if k == 0 || n == 0 {
        return Err(FactorError::Invalid("k must be at least 1 and the operator non-empty".into()));
    }
    let k = k.min(n);
    let m = if opts.subspace == 0 { (2 * k + 24).max(40) } else { opts.subspace }.min(n).max(k + 1).min(n);
    let a_norm = row_sum_norm(a).max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let random_vec = |rng: &mut ChaCha8Rng| -> Vec<C64> {
        (0..n).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect()
    };

    let block = k.clamp(2, 4).min(n);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m);
    let mut images: Vec<Vec<C64>> = Vec::with_capacity(m);
    let mut pending: VecDeque<Vec<C64>> = (0..block).map(|_| random_vec(&mut rng)).collect();
    let mut worst = f64::INFINITY;
    let mut converged = 0;

    for restart in 0..opts.max_restarts {
        while basis.len() < m {
            let mut next = pending.pop_front().unwrap_or_else(|| random_vec(&mut rng));
            let mut ok = orthonormalize(&mut next, &basis).is_some();
            for _ in 0..10 {
                if ok {
                    break;
                }
                next = random_vec(&mut rng);
                ok = orthonormalize(&mut next, &basis).is_some();
            }
            if !ok {
                break;
            }
            let image = a.matvec(&next);
            pending.push_back(image.clone());
            basis.push(next);
            images.push(image);
        }

        let dim = basis.len();
        let t = DMatrix::from_fn(dim, dim, |i, j| dot(&basis[i], &images[j]));
        let t = (&t + t.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

        let keep = (k + (m - k) / 2).min(dim - 1).max(k).min(dim);
        let mut ritz = Vec::with_capacity(keep);
        let mut ritz_images = Vec::with_capacity(keep);
        let mut thetas = Vec::with_capacity(keep);
        let mut residuals = Vec::with_capacity(keep);
        for &c in order.iter().take(keep) {
            let y = eig.eigenvectors.column(c);
            let mut v = vec![C64::new(0.0, 0.0); n];
            let mut av = vec![C64::new(0.0, 0.0); n];
            for (j, coeff) in y.iter().enumerate() {
                for ((x, ax), (b, ab)) in v.iter_mut().zip(av.iter_mut()).zip(basis[j].iter().zip(&images[j])) {
                    *x += coeff * b;
                    *ax += coeff * ab;
                }
            }
            let theta = eig.eigenvalues[c];
            let r: Vec<C64> = av.iter().zip(&v).map(|(ax, x)| ax - x * theta).collect();
            residuals.push(r);
            thetas.push(theta);
            ritz.push(v);
            ritz_images.push(av);
        }
        let res_norms: Vec<f64> = residuals.iter().map(|r| norm(r)).collect();
        converged = res_norms.iter().take(k).filter(|&&r| r <= opts.tolerance * a_norm).count();
        worst = res_norms.iter().take(k).copied().fold(0.0, f64::max);
        log::trace!("restart {restart}: {converged}/{k} converged, worst residual {worst:e}");
        if converged == k {
            let vectors: Vec<Vec<C64>> = ritz.into_iter().take(k).collect();
            return certify(a, thetas[..k].to_vec(), vectors, SolverMethod::Iterative);
        }
        if dim == n || dim < m {
            // No further directions: the basis spans an invariant subspace.
            if thetas.len() < k {
                return Err(FactorError::NoConvergence { iterations: restart, converged, wanted: k, worst_residual: worst });
            }
            let vectors: Vec<Vec<C64>> = ritz.into_iter().take(k).collect();
            return certify(a, thetas[..k].to_vec(), vectors, SolverMethod::Iterative);
        }
        pending.clear();
        let mut order_bad: Vec<usize> = (0..keep).filter(|&i| res_norms[i] > opts.tolerance * a_norm).collect();
        order_bad.truncate(block);
        for i in order_bad {
            pending.push_back(std::mem::take(&mut residuals[i]));
        }
        basis = ritz;
        images = ritz_images;
    }
    Err(FactorError::NoConvergence { iterations: opts.max_restarts, converged, wanted: k, worst_residual: worst })
}
