//! Matrix permanents and symmetrized (bosonic) inner products.

use nalgebra::DMatrix;

use crate::error::{LatticeError, Result};
use crate::sparse::C64;

pub const PERMANENT_CAP: usize = 20;
pub const NAIVE_PERMANENT_CAP: usize = 10;
pub const SYMMETRIZED_CAP: usize = 10;

fn check_square(m: &DMatrix<C64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(LatticeError::Shape(format!("permanent of {}x{} matrix", m.nrows(), m.ncols())));
    }
    Ok(m.nrows())
}

/// Ryser's formula, visiting column subsets in Gray-code order.
pub fn permanent(m: &DMatrix<C64>) -> Result<C64> {
    let n = check_square(m)?;
    if n > PERMANENT_CAP {
        return Err(LatticeError::Capacity { what: "permanent size", size: n as u128, cap: PERMANENT_CAP as u128 });
    }
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let next = k ^ (k >> 1);
        let flipped = (gray ^ next).trailing_zeros() as usize;
        let adding = next & (1 << flipped) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if adding {
                *s += m[(i, flipped)];
            } else {
                *s -= m[(i, flipped)];
            }
        }
        gray = next;
        let prod: C64 = row_sums.iter().product();
        if next.count_ones() % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if n % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

/// Sum over all permutations, by Heap's algorithm.
pub fn permanent_naive(m: &DMatrix<C64>) -> Result<C64> {
    let n = check_square(m)?;
    if n > NAIVE_PERMANENT_CAP {
        return Err(LatticeError::Capacity {
            what: "naive permanent size",
            size: n as u128,
            cap: NAIVE_PERMANENT_CAP as u128,
        });
    }
    let mut total = C64::new(0.0, 0.0);
    for_each_permutation(n, |p| {
        total += (0..n).map(|i| m[(i, p[i])]).product::<C64>();
    });
    Ok(total)
}

/// Calls `f` once for every permutation of 0..n.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_families(alphas: &[Vec<C64>], betas: &[Vec<C64>]) -> Result<usize> {
    if alphas.len() != betas.len() {
        return Err(LatticeError::Shape(format!("{} alphas vs {} betas", alphas.len(), betas.len())));
    }
    let n = alphas.len();
    if n > SYMMETRIZED_CAP {
        return Err(LatticeError::Capacity { what: "symmetrized product size", size: n as u128, cap: SYMMETRIZED_CAP as u128 });
    }
    if let Some(d) = alphas.first().map(Vec::len) {
        if alphas.iter().chain(betas).any(|v| v.len() != d) {
            return Err(LatticeError::Shape("vectors of unequal length".into()));
        }
    }
    Ok(n)
}

/// Gram matrix G_ij = (beta_i | alpha_j).
pub fn gram_matrix(alphas: &[Vec<C64>], betas: &[Vec<C64>]) -> Result<DMatrix<C64>> {
    let n = check_families(alphas, betas)?;
    Ok(DMatrix::from_fn(n, n, |i, j| inner(&betas[i], &alphas[j])))
}

/// Inner product of two symmetrized tensor products, per{(beta_i | alpha_j)}.
pub fn symmetrized_inner(alphas: &[Vec<C64>], betas: &[Vec<C64>]) -> Result<C64> {
    permanent(&gram_matrix(alphas, betas)?)
}

/// The same inner product as an explicit sum over S_n of products of overlaps.
pub fn symmetrized_inner_bruteforce(alphas: &[Vec<C64>], betas: &[Vec<C64>]) -> Result<C64> {
    let n = check_families(alphas, betas)?;
    let mut total = C64::new(0.0, 0.0);
    for_each_permutation(n, |p| {
        total += (0..n).map(|i| inner(&betas[i], &alphas[p[i]])).product::<C64>();
    });
    Ok(total)
}
