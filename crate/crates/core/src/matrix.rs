//! Dense row-major matrices over a [`Scalar`] field.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A `rows x cols` matrix stored row-major. Never empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type Vector<T> = Vec<T>;

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidShape { rows, cols, entries: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; rejects ragged or empty input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            let entries = rows.iter().map(Vec::len).sum();
            return Err(Error::InvalidShape { rows: r, cols: c, entries });
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Column vector `n x 1`.
    pub fn column(v: Vec<T>) -> Result<Self> {
        let n = v.len();
        Self::new(n, 1, v)
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        (i < self.rows && j < self.cols).then(|| &self.data[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let data = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Self { rows, cols, data }
    }

    pub fn col(&self, j: usize) -> Vector<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    /// Exact symmetry in rational mode; float mode compares bit-for-bit as well.
    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        let slot = &mut out.data[i * other.cols + j];
                        *slot = slot.clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vector<T>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { op: "mul_vec", expected: (self.cols, 1), found: (v.len(), 1) });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect())
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch { op, expected: self.shape(), found: other.shape() });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    /// `self^e`, with `self^0 = I`.
    pub fn pow(&self, e: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { op: "pow", expected: (self.rows, self.rows), found: self.shape() });
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Horizontal concatenation `[m0 m1 ...]`.
    pub fn hstack(blocks: &[Self]) -> Result<Self> {
        let first = blocks.first().ok_or(Error::InvalidShape { rows: 0, cols: 0, entries: 0 })?;
        let rows = first.rows;
        if let Some(bad) = blocks.iter().find(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch { op: "hstack", expected: (rows, bad.cols), found: bad.shape() });
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for b in blocks {
                data.extend_from_slice(b.row(i));
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[Self]) -> Result<Self> {
        let first = blocks.first().ok_or(Error::InvalidShape { rows: 0, cols: 0, entries: 0 })?;
        let cols = first.cols;
        if let Some(bad) = blocks.iter().find(|b| b.cols != cols) {
            return Err(Error::DimensionMismatch { op: "vstack", expected: (bad.rows, cols), found: bad.shape() });
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let data = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        Ok(Self { rows, cols, data })
    }

    /// Top-left `n x n` block.
    pub fn leading_block(&self, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| self[(i, j)].clone())
    }

    /// Largest componentwise `|self - other|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        let diff = self.sub(other)?;
        Ok(max_abs(diff.entries()))
    }

    fn max_abs_entry(&self) -> T {
        max_abs(&self.data)
    }

    pub fn rank(&self) -> usize {
        T::rank(self)
    }

    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "determinant",
                expected: (self.rows, self.rows),
                found: self.shape(),
            });
        }
        Ok(T::determinant(self))
    }

    pub fn is_positive_definite(&self) -> bool {
        T::is_positive_definite(self)
    }

    /// Solves `self * x = rhs` for square `self` by Gaussian elimination
    /// with partial pivoting. Fails with [`Error::Singular`] when no unique
    /// solution exists.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "solve",
                expected: (self.rows, self.rows),
                found: self.shape(),
            });
        }
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch { op: "solve", expected: (self.rows, rhs.cols), found: rhs.shape() });
        }
        let n = self.rows;
        let m = rhs.cols;
        let scale = self.max_abs_entry();
        let mut a = self.to_rows();
        let mut b = rhs.to_rows();
        for k in 0..n {
            let piv = argmax_abs(&a, k, k..n);
            if a[piv][k].is_negligible_relative(&scale) {
                return Err(Error::Singular);
            }
            a.swap(k, piv);
            b.swap(k, piv);
            for i in k + 1..n {
                let f = a[i][k].clone() / a[k][k].clone();
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let t = f.clone() * a[k][j].clone();
                    a[i][j] = a[i][j].clone() - t;
                }
                for j in 0..m {
                    let t = f.clone() * b[k][j].clone();
                    b[i][j] = b[i][j].clone() - t;
                }
            }
        }
        let mut x = vec![vec![T::zero(); m]; n];
        for k in (0..n).rev() {
            for j in 0..m {
                let mut s = b[k][j].clone();
                for c in k + 1..n {
                    s = s - a[k][c].clone() * x[c][j].clone();
                }
                x[k][j] = s / a[k][k].clone();
            }
        }
        Self::from_rows(x)
    }

    /// Nonzero `x` with `self * x = 0`, or `None` when the columns are
    /// independent. Found from the reduced row echelon form: the first free
    /// column gets coefficient one.
    pub fn null_vector(&self) -> Option<Vector<T>> {
        let (rows, cols) = self.shape();
        let scale = self.max_abs_entry();
        let mut a = self.to_rows();
        let mut pivots: Vec<usize> = Vec::new();
        let mut free = None;
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                free.get_or_insert(c);
                continue;
            }
            let piv = argmax_abs(&a, c, r..rows);
            if a[piv][c].is_negligible_relative(&scale) {
                free.get_or_insert(c);
                continue;
            }
            a.swap(r, piv);
            let p = a[r][c].clone();
            for j in 0..cols {
                a[r][j] = a[r][j].clone() / p.clone();
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..cols {
                        let t = f.clone() * a[r][j].clone();
                        a[i][j] = a[i][j].clone() - t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free = free?;
        let mut x = vec![T::zero(); cols];
        x[free] = T::one();
        for (row, &pc) in pivots.iter().enumerate() {
            if pc < free {
                x[pc] = -a[row][free].clone();
            }
        }
        Some(x)
    }
}

fn max_abs<T: Scalar>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |m, x| {
        let a = x.abs();
        if a > m {
            a
        } else {
            m
        }
    })
}

fn argmax_abs<T: Scalar>(a: &[Vec<T>], col: usize, rows: core::ops::Range<usize>) -> usize {
    let start = rows.start;
    rows.fold((start, T::zero()), |(bi, bv), i| {
        let v = a[i][col].abs();
        if v > bv {
            (i, v)
        } else {
            (bi, bv)
        }
    })
    .0
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols])).finish()
    }
}
