//! The delayed perturbation of the discrete matrix exponential.
//!
//! For a system `y(r+1) = A y(r) + B y(r-p) + C u(r)` the blocks `Q(r, i)`
//! are defined by
//!
//! ```text
//! Q(r, i) = 0                                          i < 0
//! Q(r, 0) = A^r δ(r)
//! Q(r, i) = Σ_{m=i}^{r} A^{r-m} B Q(m-1, i-1) δ(r-i)   i ≥ 1
//! ```
//!
//! and the kernel `Y(r)` is
//!
//! ```text
//! Y(r) = 0                                  r ≤ -p-1
//! Y(r) = A^{p+r}                            -p ≤ r ≤ 0
//! Y(r) = Σ_{i=0}^{⌊(r+p)/(p+1)⌋} Q(r+p-pi, i)   r ≥ 1
//! ```
//!
//! Both functions are total on the integers; callers never clip arguments.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// `y(r+1) = A y(r) + B y(r-p) + C u(r)` with `A, B` of size `d x d`,
/// `C` of size `d x k` and delay `p ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DelaySystem<T> {
    a: Matrix<T>,
    b: Matrix<T>,
    c: Matrix<T>,
    delay: usize,
}

impl<T: Scalar> DelaySystem<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>, c: Matrix<T>, delay: usize) -> Result<Self> {
        if delay == 0 {
            return Err(Error::InvalidDelay(delay));
        }
        let d = a.rows();
        if !a.is_square() {
            return Err(Error::DimensionMismatch { op: "system A", expected: (d, d), found: a.shape() });
        }
        if b.shape() != (d, d) {
            return Err(Error::DimensionMismatch { op: "system B", expected: (d, d), found: b.shape() });
        }
        if c.rows() != d {
            return Err(Error::DimensionMismatch { op: "system C", expected: (d, c.cols()), found: c.shape() });
        }
        Ok(Self { a, b, c, delay })
    }

    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<T> {
        &self.b
    }

    pub fn c(&self) -> &Matrix<T> {
        &self.c
    }

    /// State dimension `d`.
    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// Input dimension `k`.
    pub fn inputs(&self) -> usize {
        self.c.cols()
    }

    /// Delay `p`.
    pub fn delay(&self) -> usize {
        self.delay
    }

    pub fn commutes(&self) -> bool {
        // shapes were validated, products cannot fail
        self.a.mul(&self.b).ok() == self.b.mul(&self.a).ok()
    }

    pub fn table(&self) -> KernelTable<'_, T> {
        KernelTable::new(self)
    }
}

/// `⌊(r+p)/(p+1)⌋`, the number of delayed blocks contributing to `Y(r)`.
pub fn band_index(r: i64, delay: usize) -> i64 {
    let p = delay as i64;
    (r + p).div_euclid(p + 1)
}

/// Memoized evaluator for `Q(r, i)` and `Y(r)` of one system.
///
/// Evaluation takes `&mut self`; share a table across threads only behind a lock.
#[derive(Clone, Debug)]
pub struct KernelTable<'s, T> {
    sys: &'s DelaySystem<T>,
    powers: Vec<Matrix<T>>,
    q: BTreeMap<(usize, usize), Matrix<T>>,
    y: BTreeMap<i64, Matrix<T>>,
}

impl<'s, T: Scalar> KernelTable<'s, T> {
    pub fn new(sys: &'s DelaySystem<T>) -> Self {
        Self { sys, powers: alloc::vec![Matrix::identity(sys.dim())], q: BTreeMap::new(), y: BTreeMap::new() }
    }

    pub fn system(&self) -> &'s DelaySystem<T> {
        self.sys
    }

    fn zero(&self) -> Matrix<T> {
        let d = self.sys.dim();
        Matrix::zeros(d, d)
    }

    /// `A^n`, cached.
    pub fn a_power(&mut self, n: usize) -> Matrix<T> {
        while self.powers.len() <= n {
            let next = self.powers[self.powers.len() - 1].mul(&self.sys.a).expect("square");
            self.powers.push(next);
        }
        self.powers[n].clone()
    }

    /// `Q(r, i)` for any integers; zero outside `0 ≤ i ≤ r`.
    pub fn q_value(&mut self, r: i64, i: i64) -> Matrix<T> {
        if i < 0 || r < 0 || i > r {
            return self.zero();
        }
        let (r, i) = (r as usize, i as usize);
        if i == 0 {
            return self.a_power(r);
        }
        if let Some(m) = self.q.get(&(r, i)) {
            return m.clone();
        }
        let mut acc = self.zero();
        for m in i..=r {
            let inner = self.q_value(m as i64 - 1, i as i64 - 1);
            if inner.is_zero() {
                continue;
            }
            let term = self.a_power(r - m).mul(&self.sys.b).and_then(|ab| ab.mul(&inner)).expect("square");
            acc = acc.add(&term).expect("square");
        }
        self.q.insert((r, i), acc.clone());
        acc
    }

    /// `Y(r)` for any integer `r`.
    pub fn y_value(&mut self, r: i64) -> Matrix<T> {
        let p = self.sys.delay as i64;
        if r < -p {
            return self.zero();
        }
        if r <= 0 {
            return self.a_power((p + r) as usize);
        }
        if let Some(m) = self.y.get(&r) {
            return m.clone();
        }
        let mut acc = self.zero();
        for i in 0..=band_index(r, self.sys.delay) {
            let q = self.q_value(r + p - p * i, i);
            acc = acc.add(&q).expect("square");
        }
        self.y.insert(r, acc.clone());
        acc
    }

    /// `Y(r+1) - A Y(r) - B Y(r-p)`.
    pub fn y_recurrence_residual(&mut self, r: i64) -> Matrix<T> {
        let p = self.sys.delay as i64;
        let next = self.y_value(r + 1);
        let a_term = self.sys.a.mul(&self.y_value(r)).expect("square");
        let b_term = self.sys.b.mul(&self.y_value(r - p)).expect("square");
        next.sub(&a_term).and_then(|m| m.sub(&b_term)).expect("square")
    }

    /// Binomial form `C(r, i) A^{r-i} B^i`, valid only when `AB = BA`.
    pub fn commutative_oracle(&mut self, r: i64, i: i64) -> Result<Matrix<T>> {
        if !self.sys.commutes() {
            return Err(Error::NonCommuting);
        }
        if i < 0 || r < 0 || i > r {
            return Ok(self.zero());
        }
        let (r, i) = (r as usize, i as usize);
        let coeff = binomial::<T>(r, i);
        let b_pow = self.sys.b.pow(i)?;
        Ok(self.a_power(r - i).mul(&b_pow)?.scale(&coeff))
    }
}

/// `Q(r, i)` straight from the recursive definition, without memoization.
/// Exponential in `r`; meant for cross-checking small arguments.
pub fn q_direct<T: Scalar>(sys: &DelaySystem<T>, r: i64, i: i64) -> Matrix<T> {
    let d = sys.dim();
    if i < 0 || r < 0 || i > r {
        return Matrix::zeros(d, d);
    }
    if i == 0 {
        return sys.a.pow(r as usize).expect("square");
    }
    let mut acc = Matrix::zeros(d, d);
    for m in i..=r {
        let term = sys
            .a
            .pow((r - m) as usize)
            .and_then(|ap| ap.mul(&sys.b))
            .and_then(|ab| ab.mul(&q_direct(sys, m - 1, i - 1)))
            .expect("square");
        acc = acc.add(&term).expect("square");
    }
    acc
}

fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    let k = k.min(n - k);
    let mut c = T::one();
    for j in 0..k {
        c = c * T::from_i64((n - j) as i64) / T::from_i64((j + 1) as i64);
    }
    c
}
