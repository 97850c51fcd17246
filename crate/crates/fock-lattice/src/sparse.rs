use std::io::{self, BufRead, Write};
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

/// Complex matrix in compressed sparse row form.
///
/// Assembly is exact: duplicate triplets are summed and entries that sum to
/// exactly zero are dropped. Shape mismatches in the algebra are programming
/// errors and panic.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl SparseOperator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, indptr: vec![0; rows + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, C64::new(1.0, 0.0))
    }

    pub fn scaled_identity(n: usize, c: C64) -> Self {
        Self::from_diagonal(&vec![c; n])
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for (i, &d) in diag.iter().enumerate() {
            if d != C64::new(0.0, 0.0) {
                indices.push(i);
                values.push(d);
            }
            indptr.push(indices.len());
        }
        Self { rows: n, cols: n, indptr, indices, values }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        let mut row_of = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                row_of.push(r);
                last = Some((r, c));
            }
        }
        let zero = C64::new(0.0, 0.0);
        let mut k = 0;
        for idx in 0..values.len() {
            if values[idx] != zero {
                indices[k] = indices[idx];
                values[k] = values[idx];
                row_of[k] = row_of[idx];
                k += 1;
            }
        }
        indices.truncate(k);
        values.truncate(k);
        row_of.truncate(k);
        for &r in &row_of {
            indptr[r + 1] += 1;
        }
        for i in 0..rows {
            indptr[i + 1] += indptr[i];
        }
        Self { rows, cols, indptr, indices, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.rows).flat_map(move |r| {
            (self.indptr[r]..self.indptr[r + 1]).map(move |k| (r, self.indices[k], self.values[k]))
        })
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.indptr[r]..self.indptr[r + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let lo = self.indptr[r];
        let hi = self.indptr[r + 1];
        match self.indices[lo..hi].binary_search(&c) {
            Ok(k) => self.values[lo + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.iter().all(|(r, c, _)| r == c)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.indices {
            counts[c + 1] += 1;
        }
        for i in 0..self.cols {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut indices = vec![0usize; self.nnz()];
        let mut values = vec![C64::new(0.0, 0.0); self.nnz()];
        for r in 0..self.rows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let c = self.indices[k];
                let dst = next[c];
                indices[dst] = r;
                values[dst] = self.values[k].conj();
                next[c] += 1;
            }
        }
        Self { rows: self.cols, cols: self.rows, indptr: counts, indices, values }
    }

    pub fn scale(&self, alpha: C64) -> Self {
        if alpha == C64::new(0.0, 0.0) {
            return Self::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= alpha;
        }
        out
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        self.scale(C64::new(alpha, 0.0))
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, other: &Self, alpha: C64) -> Self {
        assert_eq!(self.shape(), other.shape(), "add: shape mismatch");
        let zero = C64::new(0.0, 0.0);
        let mut indptr = Vec::with_capacity(self.rows + 1);
        let mut indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        indptr.push(0);
        for r in 0..self.rows {
            let (mut a, a_end) = (self.indptr[r], self.indptr[r + 1]);
            let (mut b, b_end) = (other.indptr[r], other.indptr[r + 1]);
            while a < a_end || b < b_end {
                let ca = if a < a_end { self.indices[a] } else { usize::MAX };
                let cb = if b < b_end { other.indices[b] } else { usize::MAX };
                let (c, v) = if ca == cb {
                    let v = self.values[a] + alpha * other.values[b];
                    a += 1;
                    b += 1;
                    (ca, v)
                } else if ca < cb {
                    a += 1;
                    (ca, self.values[a - 1])
                } else {
                    b += 1;
                    (cb, alpha * other.values[b - 1])
                };
                if v != zero {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self { rows: self.rows, cols: self.cols, indptr, indices, values }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul: inner dimensions differ");
        let zero = C64::new(0.0, 0.0);
        let mut acc = vec![zero; other.cols];
        let mut marker = vec![usize::MAX; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut indptr = Vec::with_capacity(self.rows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for r in 0..self.rows {
            touched.clear();
            for k in self.indptr[r]..self.indptr[r + 1] {
                let mid = self.indices[k];
                let a = self.values[k];
                for q in other.indptr[mid]..other.indptr[mid + 1] {
                    let c = other.indices[q];
                    if marker[c] != r {
                        marker[c] = r;
                        acc[c] = zero;
                        touched.push(c);
                    }
                    acc[c] += a * other.values[q];
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                if acc[c] != zero {
                    indices.push(c);
                    values.push(acc[c]);
                }
            }
            indptr.push(indices.len());
        }
        Self { rows: self.rows, cols: other.cols, indptr, indices, values }
    }

    /// `self^p` for a square operator, `p >= 1`.
    pub fn power(&self, p: u32) -> Self {
        assert!(p >= 1, "power: exponent must be at least 1");
        assert_eq!(self.rows, self.cols, "power: operator must be square");
        let mut out = self.clone();
        for _ in 1..p {
            out = out.matmul(self);
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).add_scaled(&other.matmul(self), C64::new(-1.0, 0.0))
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols, "matvec: length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut s = C64::new(0.0, 0.0);
                for k in self.indptr[r]..self.indptr[r + 1] {
                    s += self.values[k] * x[self.indices[k]];
                }
                s
            })
            .collect()
    }

    /// Sesquilinear form <u|A|v>.
    pub fn form(&self, u: &[C64], v: &[C64]) -> C64 {
        assert_eq!(u.len(), self.rows, "form: left length mismatch");
        let av = self.matvec(v);
        u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry of |A - A^dagger|; zero for exactly Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        self.add_scaled(&self.adjoint(), C64::new(-1.0, 0.0)).max_abs()
    }

    /// (A + A^dagger)/2.
    pub fn hermitian_part(&self) -> Self {
        self.add_scaled(&self.adjoint(), C64::new(1.0, 0.0)).scale_real(0.5)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let mut t = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let v = m[(r, c)];
                if v != C64::new(0.0, 0.0) {
                    t.push((r, c, v));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), t)
    }

    /// Debug dump: a `rows cols` header, then one `row col re im` line per entry.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{} {}", self.rows, self.cols)?;
        for (r, c, v) in self.iter() {
            writeln!(w, "{} {} {:e} {:e}", r, c, v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_triplets<R: BufRead>(r: R) -> io::Result<Self> {
        let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| bad("missing header"))??;
        let mut hs = header.split_whitespace();
        let parse_usize = |s: Option<&str>| -> io::Result<usize> {
            s.ok_or_else(|| bad("short line"))?.parse().map_err(|_| bad("bad integer"))
        };
        let rows = parse_usize(hs.next())?;
        let cols = parse_usize(hs.next())?;
        let mut t = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let r = parse_usize(it.next())?;
            let c = parse_usize(it.next())?;
            let re: f64 = it.next().ok_or_else(|| bad("short line"))?.parse().map_err(|_| bad("bad float"))?;
            let im: f64 = it.next().ok_or_else(|| bad("short line"))?.parse().map_err(|_| bad("bad float"))?;
            if r >= rows || c >= cols {
                return Err(bad("entry outside declared shape"));
            }
            t.push((r, c, C64::new(re, im)));
        }
        Ok(Self::from_triplets(rows, cols, t))
    }
}

impl Add for &SparseOperator {
    type Output = SparseOperator;
    fn add(self, rhs: Self) -> SparseOperator {
        self.add_scaled(rhs, C64::new(1.0, 0.0))
    }
}

impl Sub for &SparseOperator {
    type Output = SparseOperator;
    fn sub(self, rhs: Self) -> SparseOperator {
        self.add_scaled(rhs, C64::new(-1.0, 0.0))
    }
}

impl Mul for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: Self) -> SparseOperator {
        self.matmul(rhs)
    }
}

/// Relative commutator size ||[A,B]|| / (||A|| ||B||) in the max-entry norm.
pub fn relative_commutator(a: &SparseOperator, b: &SparseOperator) -> f64 {
    let denom = a.max_abs() * b.max_abs();
    if denom == 0.0 {
        return 0.0;
    }
    a.commutator(b).max_abs() / denom
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let a = SparseOperator::from_triplets(
            2,
            2,
            vec![(0, 1, c(1.0, 0.0)), (0, 1, c(-1.0, 0.0)), (1, 0, c(2.0, 1.0)), (1, 0, c(1.0, 0.0))],
        );
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(1, 0), c(3.0, 1.0));
        assert_eq!(a.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn matmul_matches_dense() {
        let a = SparseOperator::from_triplets(2, 3, vec![(0, 0, c(1.0, 2.0)), (0, 2, c(3.0, 0.0)), (1, 1, c(0.0, -1.0))]);
        let b = SparseOperator::from_triplets(3, 2, vec![(0, 1, c(2.0, 0.0)), (1, 0, c(1.0, 1.0)), (2, 1, c(-1.0, 0.0))]);
        let p = a.matmul(&b).to_dense();
        let q = a.to_dense() * b.to_dense();
        assert!((p - q).norm() < 1e-15);
    }

    #[test]
    fn adjoint_is_involution() {
        let a = SparseOperator::from_triplets(3, 2, vec![(0, 1, c(1.0, 2.0)), (2, 0, c(-1.0, 0.5))]);
        let ad = a.adjoint();
        assert_eq!(ad.shape(), (2, 3));
        assert_eq!(ad.get(1, 0), c(1.0, -2.0));
        assert_eq!(ad.adjoint(), a);
    }

    #[test]
    fn triplet_text_round_trip() {
        let a = SparseOperator::from_triplets(3, 3, vec![(0, 2, c(0.1, -0.3)), (2, 1, c(1e-17, 4.0))]);
        let mut buf = Vec::new();
        a.write_triplets(&mut buf).unwrap();
        let b = SparseOperator::read_triplets(&buf[..]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hermitian_defect_and_part() {
        let a = SparseOperator::from_triplets(2, 2, vec![(0, 1, c(1.0, 1.0)), (1, 0, c(1.0, -1.0))]);
        assert_eq!(a.hermiticity_defect(), 0.0);
        let b = SparseOperator::from_triplets(2, 2, vec![(0, 1, c(1.0, 0.0))]);
        assert_eq!(b.hermiticity_defect(), 1.0);
        assert_eq!(b.hermitian_part().hermiticity_defect(), 0.0);
    }

    #[test]
    fn power_and_commutator() {
        let x = SparseOperator::from_triplets(2, 2, vec![(0, 1, c(1.0, 0.0)), (1, 0, c(1.0, 0.0))]);
        assert_eq!(x.power(2), SparseOperator::identity(2));
        let z = SparseOperator::from_real_diagonal(&[1.0, -1.0]);
        let comm = x.commutator(&z);
        assert_eq!(comm.get(0, 1), c(-2.0, 0.0));
        assert_eq!(comm.get(1, 0), c(2.0, 0.0));
        assert_eq!(relative_commutator(&x, &x), 0.0);
    }
}
