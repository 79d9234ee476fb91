//! Dense row-major matrices over any [`Field`], with exact and SVD ranks.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{Field, Rational};
use super::NumericError;

/// Default relative singular-value cutoff for floating-point ranks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j).add(&a.mul(o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `v^T M` for a vector of length `rows`.
    pub fn left_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.add(&vi.mul(self.get(i, j)));
            }
        }
        out
    }

    /// `M v` for a vector of length `cols`.
    pub fn right_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b))))
            .collect()
    }

    pub fn remove_row(&self, i: usize) -> Self {
        assert!(i < self.rows);
        let mut data = self.data.clone();
        data.drain(i * self.cols..(i + 1) * self.cols);
        Matrix { rows: self.rows - 1, cols: self.cols, data }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let out: Vec<Vec<T>> = rows.map(|i| self.row(i)[cols.clone()].to_vec()).collect();
        let c = cols.len();
        if out.is_empty() {
            return Self::zeros(0, c);
        }
        Self::from_rows(out)
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(T::to_f64)
    }

    /// Exact rank for exact scalars; SVD count above `tol * sigma_max` for `f64`.
    pub fn rank(&self, tol: f64) -> usize {
        T::rank_of(self, tol)
    }

    /// Basis of `{x : M x = 0}`.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<T>> {
        T::nullspace_of(self, tol)
    }

    /// Basis of the left null space `{y : y^T M = 0}`, each vector checked
    /// (exactly, or to `tol` relative accuracy for `f64`).
    pub fn cokernel(&self, tol: f64) -> Vec<Vec<T>> {
        let basis = self.transpose().nullspace(tol);
        let scale = self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max).max(1.0);
        for y in &basis {
            let r = self.left_mul(y);
            if T::EXACT {
                assert!(r.iter().all(Field::is_zero), "cokernel vector fails exact check");
            } else {
                let norm = y.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
                let res = r.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
                assert!(res <= 1e3 * tol * scale * norm.max(1.0), "cokernel vector residual {res}");
            }
        }
        basis
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }
}

/// Fraction-free elimination with row swaps and column skipping.
pub(crate) fn bareiss_rank<T: Field>(m: &Matrix<T>) -> usize {
    let mut a = m.row_vecs();
    for r in &mut a {
        T::normalise_row(r);
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let piv = &top[r];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                for x in row[c + 1..].iter_mut() {
                    *x = x.mul(&piv[c]).div(&prev);
                }
            } else {
                let lead = row[c].clone();
                for j in c + 1..cols {
                    row[j] = piv[c].mul(&row[j]).sub(&lead.mul(&piv[j])).div(&prev);
                }
                row[c] = T::zero();
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Bareiss over the integers after clearing denominators row by row.
pub(crate) fn integer_rank(m: &Matrix<Rational>) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .row_vecs()
        .into_iter()
        .map(|mut r| {
            Rational::normalise_row(&mut r);
            r.into_iter().map(|q| q.to_integer()).collect()
        })
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let piv = &top[r];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                for x in row[c + 1..].iter_mut() {
                    if !x.is_zero() {
                        *x = &*x * &piv[c] / &prev;
                    }
                }
            } else {
                let lead = row[c].clone();
                for j in c + 1..cols {
                    row[j] = (&piv[c] * &row[j] - &lead * &piv[j]) / &prev;
                }
                row[c] = BigInt::zero();
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form; returns the pivot columns.
fn rref<T: Field>(a: &mut [Vec<T>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = T::one().div(&a[r][c]);
        for x in a[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let (pivot, target) = if i < r {
                let (lo, hi) = a.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = a.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (x, p) in target[c..cols].iter_mut().zip(&pivot[c..cols]) {
                *x = x.sub(&f.mul(p));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn exact_nullspace<T: Field>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let mut a = m.row_vecs();
    let pivots = rref(&mut a, m.cols);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); m.cols];
            v[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = a[r][f].neg();
            }
            v
        })
        .collect()
}

fn to_nalgebra(m: &Matrix<f64>, pad_to: usize) -> DMatrix<f64> {
    let rows = m.rows.max(pad_to);
    DMatrix::from_fn(rows, m.cols, |i, j| if i < m.rows { *m.get(i, j) } else { 0.0 })
}

pub(crate) fn svd_rank(m: &Matrix<f64>, tol: f64) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let sv = to_nalgebra(m, 0).singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// Right singular vectors whose singular values fall below `tol * sigma_max`.
pub(crate) fn svd_nullspace(m: &Matrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    if m.cols == 0 {
        return Vec::new();
    }
    // pad with zero rows so the SVD returns a full set of right vectors
    let a = to_nalgebra(m, m.cols);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested right vectors");
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    (0..svd.singular_values.len())
        .filter(|&i| max == 0.0 || svd.singular_values[i] <= tol * max)
        .map(|i| vt.row(i).iter().copied().collect())
        .collect()
}

/// Ranks appearing in `rank M = rank A + rank (D - C A^-1 B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurReport {
    pub rank_m: usize,
    pub rank_a: usize,
    pub rank_complement: usize,
}

impl SchurReport {
    pub fn holds(&self) -> bool {
        self.rank_m == self.rank_a + self.rank_complement
    }
}

/// Splits `m` after `k` rows and columns and compares ranks through the
/// Schur complement of the invertible top-left block.
pub fn schur_rank_identity<T: Field>(m: &Matrix<T>, k: usize, tol: f64) -> Result<SchurReport, NumericError> {
    if k > m.rows || k > m.cols {
        return Err(NumericError::Dimension(format!("split {k} exceeds a {}x{} matrix", m.rows, m.cols)));
    }
    let a = m.submatrix(0..k, 0..k);
    if a.rank(tol) != k {
        return Err(NumericError::SingularBlock);
    }
    let b = m.submatrix(0..k, k..m.cols);
    let c = m.submatrix(k..m.rows, 0..k);
    let d = m.submatrix(k..m.rows, k..m.cols);
    // solve A X = B by eliminating [A | B]
    let mut aug: Vec<Vec<T>> = (0..k).map(|i| a.row(i).iter().chain(b.row(i)).cloned().collect()).collect();
    let pivots = rref(&mut aug, k);
    debug_assert_eq!(pivots.len(), k);
    let x = Matrix::from_rows(aug.into_iter().map(|r| r[k..].to_vec()).collect::<Vec<_>>());
    let x = if k == 0 { Matrix::zeros(0, m.cols - k) } else { x };
    let cx = c.mul(&x);
    let mut f = d.clone();
    for i in 0..f.rows {
        for j in 0..f.cols {
            let v = d.get(i, j).sub(cx.get(i, j));
            f.set(i, j, v);
        }
    }
    Ok(SchurReport { rank_m: m.rank(tol), rank_a: k, rank_complement: f.rank(tol) })
}
