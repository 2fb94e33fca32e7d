use std::fmt;

use thiserror::Error;

use super::echelon::{canonical_rows, primitivize};
use super::subspace::SubspaceBasis;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("matrix is not square ({rows}x{cols})")]
pub struct NonSquare {
    pub rows: usize,
    pub cols: usize,
}

/// Dense row-major matrix over an exact integer scalar.
///
/// Vectors are columns: `m.apply(v)` computes `m * v`, so the image of the
/// `i`-th basis vector is the `i`-th column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| S::from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut S {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col_vec(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self.entry(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.entry_mut(c, r) = self.entry(r, c).clone();
            }
        }
        t
    }

    /// `self * v` (column convention).
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for c in 0..self.cols {
                    if !self.entry(r, c).is_zero() && !v[c].is_zero() {
                        acc = acc + self.entry(r, c).clone() * v[c].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out: Matrix<S> = Matrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.entry(k, c);
                    if !b.is_zero() {
                        let cur = out.entry(r, c).clone();
                        *out.entry_mut(r, c) = cur + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Result<Matrix<S>, NonSquare> {
        if self.rows != self.cols {
            return Err(NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        Ok(out)
    }

    /// Submatrix on the given row and column index sets (in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<S> {
        let mut out = Matrix::zero(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                *out.entry_mut(i, j) = self.entry(r, c).clone();
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entry(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn exact_rank<S: Scalar>(m: &Matrix<S>) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.row_vecs();
    let mut prev = S::one();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let pivot = a[rank][col].clone();
        for r in rank + 1..rows {
            let lead = a[r][col].clone();
            for c in col..cols {
                let v = S::combine(&pivot, &a[r][c], &lead, &a[rank][c])
                    .expect("scalar overflow in exact_rank");
                a[r][c] = v / prev.clone();
            }
        }
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Canonical primitive integer basis of the right kernel of `m` over the
/// rationals.
pub fn kernel_basis<S: Scalar>(m: &Matrix<S>) -> SubspaceBasis<S> {
    let cols = m.cols();
    let rref = canonical_rows(cols, m.row_vecs());
    let mut pivot_cols = Vec::with_capacity(rref.len());
    for row in &rref {
        pivot_cols.push(row.iter().position(|e| !e.is_zero()).unwrap());
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        // Common denominator across the pivot rows touching this free column.
        let mut denom = S::one();
        for (row, &pc) in rref.iter().zip(&pivot_cols) {
            if !row[free].is_zero() {
                let p = row[pc].clone();
                denom = denom.clone() * (p.clone() / denom.gcd(&p));
            }
        }
        let mut v = vec![S::zero(); cols];
        v[free] = denom.clone();
        for (row, &pc) in rref.iter().zip(&pivot_cols) {
            if !row[free].is_zero() {
                // p * x_pc + row[free] * denom = 0
                v[pc] = -(row[free].clone() * denom.clone() / row[pc].clone());
            }
        }
        primitivize(&mut v);
        debug_assert!(m.apply(&v).iter().all(|e| e.is_zero()));
        basis.push(v);
    }
    let out = SubspaceBasis::span(cols, basis);
    debug_assert_eq!(out.dim(), cols - exact_rank(m));
    out
}
