//! Relative controllability: the Kalman-type matrix `S`, the minimal
//! horizon, the steering vector `η`, the Gramian and the kernel null test.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::kernel::{DelaySystem, KernelTable};
use crate::matrix::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::system::{free_response, InitialHistory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Controllable,
    /// `rank(S) < d`.
    RankDeficient,
    /// `rank(S) = d` but the queried horizon is below `r*`.
    HorizonTooShort,
}

impl Verdict {
    pub fn is_controllable(self) -> bool {
        self == Verdict::Controllable
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Controllable => "controllable",
            Verdict::RankDeficient => "uncontrollable",
            Verdict::HorizonTooShort => "uncontrollable-at-horizon",
        }
    }

    /// Short reason tag, `None` when controllable.
    pub fn reason(self) -> Option<&'static str> {
        match self {
            Verdict::Controllable => None,
            Verdict::RankDeficient => Some("rank-deficient"),
            Verdict::HorizonTooShort => Some("horizon"),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ControllabilityReport<T> {
    /// `S`, `d x (d·d·k)`.
    pub kalman: Matrix<T>,
    pub rank: usize,
    pub dim: usize,
    pub inputs: usize,
    /// `rank(C)`, or `k` when `C = 0`.
    pub effective_inputs: usize,
    pub delay: usize,
    pub r_star: usize,
    pub horizon: Option<usize>,
    pub verdict: Verdict,
}

/// `S = [Q(0,0)C ... Q(0,d-1)C  Q(1,0)C ... Q(d-1,d-1)C]`.
///
/// Blocks with `i > r` are zero and kept, so the shape depends only on `d` and `k`.
pub fn kalman_matrix<T: Scalar>(table: &mut KernelTable<'_, T>) -> Matrix<T> {
    let sys = table.system();
    let d = sys.dim() as i64;
    let mut blocks = Vec::with_capacity((d * d) as usize);
    for r in 0..d {
        for i in 0..d {
            blocks.push(table.q_value(r, i).mul(sys.c()).expect("d x k"));
        }
    }
    Matrix::hstack(&blocks).expect("same row count")
}

/// `(rank(S), rank(S) == d)`.
pub fn rank_condition<T: Scalar>(table: &mut KernelTable<'_, T>) -> (usize, bool) {
    let rank = kalman_matrix(table).rank();
    (rank, rank == table.system().dim())
}

/// `r* = (⌈d/k⌉ - 1)(p + 1) + 1`: with `m = ⌈d/k⌉ - 1` the smallest integer
/// satisfying `(m + 1) k ≥ d`.
pub fn minimal_horizon(d: usize, k: usize, p: usize) -> usize {
    assert!(d >= 1 && k >= 1, "dimensions must be positive");
    (d.div_ceil(k) - 1) * (p + 1) + 1
}

/// Number of independent input directions: `rank(C)`, or `k` when `C = 0`.
pub fn effective_inputs<T: Scalar>(sys: &DelaySystem<T>) -> usize {
    match sys.c().rank() {
        0 => sys.inputs(),
        r => r,
    }
}

/// Minimal horizon of a concrete system, counting independent inputs only.
pub fn system_minimal_horizon<T: Scalar>(sys: &DelaySystem<T>) -> usize {
    minimal_horizon(sys.dim(), effective_inputs(sys), sys.delay())
}

pub fn analyze<T: Scalar>(table: &mut KernelTable<'_, T>, horizon: Option<usize>) -> ControllabilityReport<T> {
    let sys = table.system();
    let kalman = kalman_matrix(table);
    let rank = kalman.rank();
    let effective = effective_inputs(sys);
    let r_star = minimal_horizon(sys.dim(), effective, sys.delay());
    let verdict = if rank < sys.dim() {
        Verdict::RankDeficient
    } else if horizon.is_some_and(|r1| r1 < r_star) {
        Verdict::HorizonTooShort
    } else {
        Verdict::Controllable
    };
    ControllabilityReport {
        kalman,
        rank,
        dim: sys.dim(),
        inputs: sys.inputs(),
        effective_inputs: effective,
        delay: sys.delay(),
        r_star,
        horizon,
        verdict,
    }
}

fn check_horizon(r1: usize) -> Result<()> {
    if r1 == 0 {
        Err(Error::InvalidHorizon(r1))
    } else {
        Ok(())
    }
}

/// `η = y* - Y(r1-p) ψ(0) - Σ_{j=-p}^{-1} Y(r1-1-2p-j) B ψ(j)`.
pub fn steering_vector<T: Scalar>(
    table: &mut KernelTable<'_, T>,
    hist: &InitialHistory<T>,
    target: &[T],
    r1: usize,
) -> Result<Vector<T>> {
    check_horizon(r1)?;
    let d = table.system().dim();
    if target.len() != d {
        return Err(Error::DimensionMismatch { op: "target", expected: (d, 1), found: (target.len(), 1) });
    }
    let free = free_response(table, hist, r1 as i64)?;
    Ok(target.iter().zip(free).map(|(y, f)| y.clone() - f).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gramian<T> {
    pub horizon: usize,
    pub matrix: Matrix<T>,
    pub positive_definite: bool,
}

/// `Γ = Σ_{j=1}^{r1} Y(r1-p-j) C Cᵀ Y(r1-p-j)ᵀ`.
pub fn gramian<T: Scalar>(table: &mut KernelTable<'_, T>, r1: usize) -> Result<Gramian<T>> {
    check_horizon(r1)?;
    let sys = table.system();
    let d = sys.dim();
    let p = sys.delay() as i64;
    let mut g = Matrix::zeros(d, d);
    for j in 1..=r1 as i64 {
        let kc = table.y_value(r1 as i64 - p - j).mul(sys.c())?;
        g = g.add(&kc.mul(&kc.transpose())?)?;
    }
    let positive_definite = g.is_positive_definite();
    Ok(Gramian { horizon: r1, matrix: g, positive_definite })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NullTest<T> {
    pub full_rank: bool,
    /// Nonzero `η` with `ηᵀ Y(r) C = 0` for every tested `r`.
    pub witness: Option<Vector<T>>,
}

/// Stacks `(Y(r) C)ᵀ` for `r ∈ [-p, r_max]` and looks for a nonzero `η`
/// annihilating every block.
pub fn kernel_null_test<T: Scalar>(table: &mut KernelTable<'_, T>, r_max: i64) -> NullTest<T> {
    let sys = table.system();
    let d = sys.dim();
    let p = sys.delay() as i64;
    let blocks: Vec<Matrix<T>> =
        (-p..=r_max).map(|r| table.y_value(r).mul(sys.c()).expect("d x k").transpose()).collect();
    let Ok(stacked) = Matrix::vstack(&blocks) else {
        let mut e = alloc::vec![T::zero(); d];
        e[0] = T::one();
        return NullTest { full_rank: false, witness: Some(e) };
    };
    if stacked.rank() == d {
        return NullTest { full_rank: true, witness: None };
    }
    NullTest { full_rank: false, witness: stacked.null_vector() }
}

/// [`kernel_null_test`] over its full support `[-p, r* - 1]`.
pub fn kernel_null_test_default<T: Scalar>(table: &mut KernelTable<'_, T>) -> NullTest<T> {
    let r_star = system_minimal_horizon(table.system()) as i64;
    kernel_null_test(table, r_star - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use alloc::vec;

    fn v(xs: &[i64]) -> Vector<Rational> {
        xs.iter().map(|&x| Rational::from_i64(x)).collect()
    }

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    fn reference() -> DelaySystem<Rational> {
        DelaySystem::new(m(&[&[1, 2], &[0, 1]]), m(&[&[0, 1], &[1, 0]]), m(&[&[1], &[0]]), 1).unwrap()
    }

    #[test]
    fn kalman_matrix_example() {
        let sys = reference();
        let s = kalman_matrix(&mut sys.table());
        assert_eq!(s.shape(), (2, 4));
        // blocks: Q(0,0)C = C, Q(0,1)C = 0, Q(1,0)C = AC, Q(1,1)C = BC
        assert_eq!(s, m(&[&[1, 0, 1, 0], &[0, 0, 0, 1]]));
        assert_eq!(rank_condition(&mut sys.table()), (2, true));
    }

    #[test]
    fn kalman_without_delay_term() {
        let a = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 2, 3]]);
        let c = m(&[&[0], &[0], &[1]]);
        let sys = DelaySystem::new(a.clone(), Matrix::zeros(3, 3), c.clone(), 2).unwrap();
        let s = kalman_matrix(&mut sys.table());
        let classical = Matrix::hstack(&[c.clone(), a.mul(&c).unwrap(), a.pow(2).unwrap().mul(&c).unwrap()]).unwrap();
        assert_eq!(s.rank(), classical.rank());
        assert_eq!(Matrix::hstack(&[s, classical.clone()]).unwrap().rank(), classical.rank());
    }

    #[test]
    fn scalar_system_kalman_is_c() {
        let sys = DelaySystem::new(m(&[&[3]]), m(&[&[5]]), m(&[&[2, 7]]), 2).unwrap();
        assert_eq!(kalman_matrix(&mut sys.table()), m(&[&[2, 7]]));
    }

    #[test]
    fn rank_condition_failures() {
        let sys = DelaySystem::new(m(&[&[1, 2], &[0, 1]]), m(&[&[0, 1], &[1, 0]]), Matrix::zeros(2, 1), 1).unwrap();
        assert_eq!(rank_condition(&mut sys.table()), (0, false));
        let sys = DelaySystem::new(Matrix::identity(2), Matrix::identity(2), m(&[&[1], &[0]]), 1).unwrap();
        assert_eq!(rank_condition(&mut sys.table()), (1, false));
    }

    #[test]
    fn minimal_horizon_examples() {
        assert_eq!(minimal_horizon(2, 1, 1), 3);
        assert_eq!(minimal_horizon(4, 4, 3), 1);
        assert_eq!(minimal_horizon(3, 2, 2), 4);
    }

    #[test]
    fn minimal_horizon_uses_independent_inputs() {
        // two identical input columns act like one
        let sys =
            DelaySystem::new(m(&[&[-2, 0], &[1, -2]]), m(&[&[1, -1], &[1, 2]]), m(&[&[0, 2], &[0, 2]]), 1).unwrap();
        assert_eq!(effective_inputs(&sys), 1);
        assert_eq!(system_minimal_horizon(&sys), 3);
        let mut t = sys.table();
        assert!(rank_condition(&mut t).1);
        assert!(!gramian(&mut t, 1).unwrap().positive_definite);
        assert!(gramian(&mut t, 3).unwrap().positive_definite);
    }

    #[test]
    fn analyze_verdicts() {
        let sys = reference();
        let report = analyze(&mut sys.table(), Some(3));
        assert_eq!((report.rank, report.r_star, report.verdict), (2, 3, Verdict::Controllable));
        assert_eq!(analyze(&mut sys.table(), Some(2)).verdict, Verdict::HorizonTooShort);
        assert_eq!(analyze(&mut sys.table(), None).verdict, Verdict::Controllable);
        let zero_c = DelaySystem::new(sys.a().clone(), sys.b().clone(), Matrix::zeros(2, 1), 1).unwrap();
        let report = analyze(&mut zero_c.table(), Some(3));
        assert_eq!(report.verdict, Verdict::RankDeficient);
        assert_eq!(report.verdict.reason(), Some("rank-deficient"));
    }

    #[test]
    fn steering_vector_examples() {
        let sys = reference();
        let mut t = sys.table();
        let hist = InitialHistory::new(1, vec![v(&[1, 0]), v(&[2, 1])]).unwrap();
        assert_eq!(steering_vector(&mut t, &hist, &v(&[21, 14]), 3).unwrap(), v(&[2, 6]));
        let free = free_response(&mut t, &hist, 3).unwrap();
        assert_eq!(steering_vector(&mut t, &hist, &free, 3).unwrap(), v(&[0, 0]));
        let zero = InitialHistory::zeros(1, 2);
        assert_eq!(steering_vector(&mut t, &zero, &v(&[4, -1]), 5).unwrap(), v(&[4, -1]));
        assert!(steering_vector(&mut t, &hist, &v(&[1]), 3).is_err());
        assert_eq!(steering_vector(&mut t, &hist, &v(&[1, 1]), 0), Err(Error::InvalidHorizon(0)));
    }

    #[test]
    fn gramian_examples() {
        let sys = reference();
        let mut t = sys.table();
        let g = gramian(&mut t, 3).unwrap();
        assert_eq!(g.matrix, m(&[&[3, 1], &[1, 1]]));
        assert_eq!(g.matrix.determinant().unwrap(), Rational::from_i64(2));
        assert!(g.positive_definite);
        let g1 = gramian(&mut t, 1).unwrap();
        assert_eq!(g1.matrix, sys.c().mul(&sys.c().transpose()).unwrap());

        let zero_c = DelaySystem::new(sys.a().clone(), sys.b().clone(), Matrix::zeros(2, 1), 1).unwrap();
        let g = gramian(&mut zero_c.table(), 3).unwrap();
        assert!(g.matrix.is_zero() && !g.positive_definite);
    }

    #[test]
    fn null_test_examples() {
        let sys = reference();
        assert_eq!(kernel_null_test(&mut sys.table(), 2), NullTest { full_rank: true, witness: None });
        assert!(kernel_null_test_default(&mut sys.table()).full_rank);

        let zero_c = DelaySystem::new(sys.a().clone(), sys.b().clone(), Matrix::zeros(2, 1), 1).unwrap();
        let res = kernel_null_test(&mut zero_c.table(), 2);
        assert!(!res.full_rank);
        assert!(res.witness.unwrap().iter().any(|x| *x != Rational::from_i64(0)));

        let sys = DelaySystem::new(Matrix::identity(2), Matrix::identity(2), m(&[&[1], &[0]]), 1).unwrap();
        let res = kernel_null_test(&mut sys.table(), 2);
        assert!(!res.full_rank);
        assert_eq!(res.witness, Some(v(&[0, 1])));
    }
}
