//! Fraction-free (Bareiss) elimination over the integers.
//!
//! Rational rows are first cleared of denominators by multiplying each row
//! with the lcm of its denominators, which preserves rank and scales the
//! determinant by a known factor. Every intermediate entry of the Bareiss
//! sweep is a minor of the integer matrix, so each division is exact.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::Matrix;
use crate::scalar::Rational;

/// Integer grid plus the product of the row multipliers used to build it.
fn integer_rows(m: &Matrix<Rational>) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect::<Vec<_>>()
        })
        .collect();
    (rows, scale)
}

/// Bareiss sweep with column skipping. Returns the rank and, for square
/// input, the signed last pivot (the integer determinant).
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, BigInt, bool) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut negate = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        if piv != rank {
            a.swap(piv, rank);
            negate = !negate;
        }
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "inexact Bareiss division");
                a[i][j] = q;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    (rank, prev, negate)
}

pub(crate) fn rank(m: &Matrix<Rational>) -> usize {
    let (mut a, _) = integer_rows(m);
    bareiss(&mut a, m.cols()).0
}

pub(crate) fn determinant(m: &Matrix<Rational>) -> Rational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let (mut a, scale) = integer_rows(m);
    let (rank, last, negate) = bareiss(&mut a, n);
    if rank < n {
        return Rational::zero();
    }
    let det = if negate { -last } else { last };
    Rational::new(det, scale.abs())
}
