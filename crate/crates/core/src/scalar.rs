//! Scalar fields the matrix routines run over.
//!
//! Two instantiations exist: [`Rational`] (arbitrary-precision, exact, the
//! default everywhere) and `f64` (binary floating point, for large random
//! sweeps). Elimination-based queries that need a different strategy per
//! field (rank, determinant, definiteness) are trait methods so each field
//! picks its own algorithm.

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::fraction_free;
use crate::matrix::Matrix;

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Absolute tolerance used by the float instantiation for residuals.
pub const FLOAT_ABS_TOL: f64 = 1e-9;

/// Relative pivot threshold used by the float instantiation.
pub const FLOAT_PIVOT_TOL: f64 = 1e-9;

pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Whether arithmetic is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Conversion from a binary float; `None` for non-finite input.
    fn from_f64(v: f64) -> Option<Self>;

    /// Parses `"n"`, `"-n"` or `"n/m"`. The float instantiation also
    /// accepts decimal notation.
    fn parse(s: &str) -> Option<Self>;

    fn abs(&self) -> Self;

    fn to_f64(&self) -> f64;

    /// Residual test: exactly zero, or within [`FLOAT_ABS_TOL`] for floats.
    fn is_negligible(&self) -> bool;

    /// Pivot test against the magnitude `scale` of the block being reduced.
    fn is_negligible_relative(&self, scale: &Self) -> bool;

    fn rank(m: &Matrix<Self>) -> usize;

    /// Determinant of a square matrix.
    fn determinant(m: &Matrix<Self>) -> Self;

    /// Positive definiteness of a symmetric matrix.
    fn is_positive_definite(m: &Matrix<Self>) -> bool;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }

    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num = parse_int(num)?;
        let den = match den {
            Some(d) => parse_int(d)?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return None;
        }
        Some(Rational::new(num, den))
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_negligible_relative(&self, _scale: &Self) -> bool {
        self.is_zero()
    }

    fn rank(m: &Matrix<Self>) -> usize {
        fraction_free::rank(m)
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        fraction_free::determinant(m)
    }

    fn is_positive_definite(m: &Matrix<Self>) -> bool {
        // Sylvester: every leading principal minor strictly positive.
        m.is_square()
            && m.is_symmetric()
            && (1..=m.rows()).all(|n| fraction_free::determinant(&m.leading_block(n)) > Zero::zero())
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

fn fabs(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        x
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            if d == 0.0 {
                return None;
            }
            return Some(n / d);
        }
        s.parse::<f64>().ok().filter(|v| v.is_finite())
    }

    fn abs(&self) -> Self {
        fabs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        fabs(*self) <= FLOAT_ABS_TOL
    }

    fn is_negligible_relative(&self, scale: &Self) -> bool {
        fabs(*self) <= FLOAT_PIVOT_TOL * *scale
    }

    fn rank(m: &Matrix<Self>) -> usize {
        float_rank(m)
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        assert!(m.is_square(), "determinant of a non-square matrix");
        let n = m.rows();
        let mut a: alloc::vec::Vec<f64> = m.entries().to_vec();
        let mut det = 1.0;
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| fabs(a[i * n + k]).total_cmp(&fabs(a[j * n + k]))).unwrap_or(k);
            if a[piv * n + k] == 0.0 {
                return 0.0;
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                det = -det;
            }
            let p = a[k * n + k];
            det *= p;
            for i in k + 1..n {
                let f = a[i * n + k] / p;
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        det
    }

    fn is_positive_definite(m: &Matrix<Self>) -> bool {
        if !m.is_square() {
            return false;
        }
        let n = m.rows();
        let a = m.entries();
        let scale = (0..n).map(|i| fabs(a[i * n + i])).fold(0.0, f64::max);
        for i in 0..n {
            for j in 0..i {
                let tol = FLOAT_PIVOT_TOL * scale.max(1.0);
                if fabs(a[i * n + j] - a[j * n + i]) > tol {
                    return false;
                }
            }
        }
        if scale == 0.0 {
            return false;
        }
        // Cholesky with a relative pivot floor.
        let mut l = alloc::vec![0.0f64; n * n];
        for j in 0..n {
            let mut diag = a[j * n + j];
            for k in 0..j {
                diag -= l[j * n + k] * l[j * n + k];
            }
            if diag <= FLOAT_PIVOT_TOL * scale {
                return false;
            }
            let root = sqrt(diag);
            l[j * n + j] = root;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / root;
            }
        }
        true
    }
}

// Newton iteration; `core` has no float sqrt without std.
fn sqrt(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut g = if x > 1.0 { x } else { 1.0 };
    for _ in 0..200 {
        let next = 0.5 * (g + x / g);
        if next >= g {
            break;
        }
        g = next;
    }
    g
}

/// Row echelon with scaled partial pivoting. A column is skipped when its
/// best pivot is below `FLOAT_PIVOT_TOL` times the largest entry of the
/// matrix being reduced.
fn float_rank(m: &Matrix<f64>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: alloc::vec::Vec<f64> = m.entries().to_vec();
    let block_max = a.iter().fold(0.0f64, |m, x| m.max(fabs(*x)));
    if block_max == 0.0 {
        return 0;
    }
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in rank..rows {
            let row_max = (col..cols).map(|j| fabs(a[i * cols + j])).fold(0.0, f64::max);
            if row_max == 0.0 {
                continue;
            }
            let score = fabs(a[i * cols + col]) / row_max;
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((i, score));
            }
        }
        let Some((piv, _)) = best else { break };
        if fabs(a[piv * cols + col]) <= FLOAT_PIVOT_TOL * block_max {
            continue;
        }
        for j in 0..cols {
            a.swap(rank * cols + j, piv * cols + j);
        }
        let p = a[rank * cols + col];
        for i in rank + 1..rows {
            let f = a[i * cols + col] / p;
            if f != 0.0 {
                for j in col..cols {
                    a[i * cols + j] -= f * a[rank * cols + j];
                }
            }
        }
        rank += 1;
    }
    rank
}
