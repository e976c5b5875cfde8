//! Histories, control sequences and trajectories, with the direct
//! recurrence and the closed-form representation of the solution.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel::{DelaySystem, KernelTable};
use crate::matrix::{Matrix, Vector};
use crate::scalar::Scalar;

/// Prescribed states `ψ(r)` for `r = -p ..= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialHistory<T> {
    delay: usize,
    values: Vec<Vector<T>>,
}

impl<T: Scalar> InitialHistory<T> {
    /// `values[0]` is `ψ(-p)`, the last entry is `ψ(0)`.
    pub fn new(delay: usize, values: Vec<Vector<T>>) -> Result<Self> {
        if delay == 0 {
            return Err(Error::InvalidDelay(delay));
        }
        if values.len() != delay + 1 {
            return Err(Error::DimensionMismatch { op: "history", expected: (delay + 1, 1), found: (values.len(), 1) });
        }
        let d = values[0].len();
        if let Some(bad) = values.iter().find(|v| v.is_empty() || v.len() != d) {
            return Err(Error::DimensionMismatch { op: "history", expected: (d, 1), found: (bad.len(), 1) });
        }
        Ok(Self { delay, values })
    }

    pub fn zeros(delay: usize, dim: usize) -> Self {
        Self { delay, values: alloc::vec![alloc::vec![T::zero(); dim]; delay + 1] }
    }

    pub fn delay(&self) -> usize {
        self.delay
    }

    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    /// `ψ(r)` for `-p ≤ r ≤ 0`.
    pub fn at(&self, r: i64) -> Option<&[T]> {
        let idx = r + self.delay as i64;
        (r <= 0 && idx >= 0).then(|| self.values[idx as usize].as_slice())
    }

    pub fn values(&self) -> &[Vector<T>] {
        &self.values
    }

    fn check(&self, sys: &DelaySystem<T>) -> Result<()> {
        if self.delay != sys.delay() {
            return Err(Error::DimensionMismatch {
                op: "history delay",
                expected: (sys.delay() + 1, sys.dim()),
                found: (self.delay + 1, self.dim()),
            });
        }
        if self.dim() != sys.dim() {
            return Err(Error::DimensionMismatch { op: "history", expected: (sys.dim(), 1), found: (self.dim(), 1) });
        }
        Ok(())
    }
}

/// Inputs `u(0), ..., u(r1-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSequence<T> {
    inputs: usize,
    values: Vec<Vector<T>>,
}

impl<T: Scalar> ControlSequence<T> {
    pub fn new(inputs: usize, values: Vec<Vector<T>>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| v.len() != inputs) {
            return Err(Error::DimensionMismatch { op: "control", expected: (inputs, 1), found: (bad.len(), 1) });
        }
        Ok(Self { inputs, values })
    }

    pub fn zeros(len: usize, inputs: usize) -> Self {
        Self { inputs, values: alloc::vec![alloc::vec![T::zero(); inputs]; len] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn at(&self, r: usize) -> &[T] {
        &self.values[r]
    }

    pub fn values(&self) -> &[Vector<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Vector<T>] {
        &mut self.values
    }

    fn check(&self, sys: &DelaySystem<T>) -> Result<()> {
        if self.inputs != sys.inputs() {
            return Err(Error::DimensionMismatch {
                op: "control",
                expected: (sys.inputs(), 1),
                found: (self.inputs, 1),
            });
        }
        Ok(())
    }
}

/// States `y(r)` for `r = -p ..= r1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    delay: usize,
    states: Vec<Vector<T>>,
}

impl<T: Scalar> Trajectory<T> {
    /// Rebuilds a trajectory from stored states (`states[0]` is `y(-p)`).
    /// Use [`Trajectory::satisfies`] to re-check it against a system.
    pub fn from_states(delay: usize, states: Vec<Vector<T>>) -> Result<Self> {
        if delay == 0 {
            return Err(Error::InvalidDelay(0));
        }
        if states.len() < delay + 2 {
            return Err(Error::InvalidHorizon(states.len().saturating_sub(delay + 1)));
        }
        Ok(Self { delay, states })
    }

    pub fn delay(&self) -> usize {
        self.delay
    }

    /// `r1`, the last index.
    pub fn horizon(&self) -> usize {
        self.states.len() - self.delay - 1
    }

    pub fn state(&self, r: i64) -> Option<&[T]> {
        let idx = r + self.delay as i64;
        (idx >= 0).then(|| self.states.get(idx as usize)).flatten().map(Vec::as_slice)
    }

    pub fn terminal(&self) -> &[T] {
        &self.states[self.states.len() - 1]
    }

    /// `(r, y(r))` in increasing `r`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &[T])> {
        let p = self.delay as i64;
        self.states.iter().enumerate().map(move |(i, s)| (i as i64 - p, s.as_slice()))
    }

    /// Agrees with `hist` on `[-p, 0]` and satisfies the recurrence under
    /// `u` at every step (exactly, or within the float tolerance).
    pub fn satisfies(&self, sys: &DelaySystem<T>, hist: &InitialHistory<T>, u: &ControlSequence<T>) -> bool {
        let p = self.delay as i64;
        if self.delay != sys.delay() || u.len() < self.horizon() {
            return false;
        }
        let hist_ok = (-p..=0).all(|r| match (self.state(r), hist.at(r)) {
            (Some(a), Some(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_negligible())
            }
            _ => false,
        });
        hist_ok
            && (0..self.horizon() as i64).all(|r| {
                let (Some(now), Some(lag), Some(next)) = (self.state(r), self.state(r - p), self.state(r + 1)) else {
                    return false;
                };
                match step(sys, now, lag, u.at(r as usize)) {
                    Ok(expected) => expected.iter().zip(next).all(|(x, y)| (x.clone() - y.clone()).is_negligible()),
                    Err(_) => false,
                }
            })
    }
}

fn add_vec<T: Scalar>(a: &[T], b: &[T]) -> Vector<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

fn step<T: Scalar>(sys: &DelaySystem<T>, now: &[T], lag: &[T], u: &[T]) -> Result<Vector<T>> {
    let ay = sys.a().mul_vec(now)?;
    let by = sys.b().mul_vec(lag)?;
    let cu = sys.c().mul_vec(u)?;
    Ok(add_vec(&add_vec(&ay, &by), &cu))
}

/// Runs `y(r+1) = A y(r) + B y(r-p) + C u(r)` for `r = 0 .. r1`.
pub fn simulate<T: Scalar>(
    sys: &DelaySystem<T>,
    hist: &InitialHistory<T>,
    u: &ControlSequence<T>,
    r1: usize,
) -> Result<Trajectory<T>> {
    if r1 == 0 {
        return Err(Error::InvalidHorizon(r1));
    }
    hist.check(sys)?;
    u.check(sys)?;
    if u.len() != r1 {
        return Err(Error::DimensionMismatch {
            op: "control length",
            expected: (r1, sys.inputs()),
            found: (u.len(), u.inputs()),
        });
    }
    let p = sys.delay();
    let mut states: Vec<Vector<T>> = hist.values().to_vec();
    for r in 0..r1 {
        // states[r + p] is y(r), states[r] is y(r - p)
        let next = step(sys, &states[r + p], &states[r], u.at(r))?;
        states.push(next);
    }
    Ok(Trajectory { delay: p, states })
}

/// `Y(r-p) ψ(0) + Σ_{j=-p}^{-1} Y(r-1-2p-j) B ψ(j)`: the state at `r` with zero input.
pub fn free_response<T: Scalar>(table: &mut KernelTable<'_, T>, hist: &InitialHistory<T>, r: i64) -> Result<Vector<T>> {
    let sys = table.system();
    hist.check(sys)?;
    let p = sys.delay() as i64;
    let psi0 = hist.at(0).expect("history covers 0");
    let mut acc = table.y_value(r - p).mul_vec(psi0)?;
    for j in -p..=-1 {
        let kernel = table.y_value(r - 1 - 2 * p - j);
        if kernel.is_zero() {
            continue;
        }
        let psi = hist.at(j).expect("history covers [-p, 0]");
        let term = kernel.mul(sys.b())?.mul_vec(psi)?;
        acc = add_vec(&acc, &term);
    }
    Ok(acc)
}

/// `Σ_{j=1}^{r} Y(r-p-j) C u(j-1)`: the state at `r` from zero history.
pub fn forced_response<T: Scalar>(
    table: &mut KernelTable<'_, T>,
    u: &ControlSequence<T>,
    r: usize,
) -> Result<Vector<T>> {
    let sys = table.system();
    u.check(sys)?;
    if r > u.len() {
        return Err(Error::IndexOutOfRange { index: r as i64, min: 0, max: u.len() as i64 });
    }
    let p = sys.delay() as i64;
    let mut acc = alloc::vec![T::zero(); sys.dim()];
    for j in 1..=r {
        let kc = table.y_value(r as i64 - p - j as i64).mul(sys.c())?;
        acc = add_vec(&acc, &kc.mul_vec(u.at(j - 1))?);
    }
    Ok(acc)
}

/// The representation formula for `y(r)`, `0 ≤ r ≤ len(u)`.
pub fn closed_form_state<T: Scalar>(
    table: &mut KernelTable<'_, T>,
    hist: &InitialHistory<T>,
    u: &ControlSequence<T>,
    r: i64,
) -> Result<Vector<T>> {
    if r < 0 || r > u.len() as i64 {
        return Err(Error::IndexOutOfRange { index: r, min: 0, max: u.len() as i64 });
    }
    let free = free_response(table, hist, r)?;
    let forced = forced_response(table, u, r as usize)?;
    Ok(add_vec(&free, &forced))
}

/// Largest componentwise gap between [`simulate`] and [`closed_form_state`]
/// over `r ∈ [0, r1]`.
pub fn representation_residual<T: Scalar>(
    table: &mut KernelTable<'_, T>,
    hist: &InitialHistory<T>,
    u: &ControlSequence<T>,
    r1: usize,
) -> Result<T> {
    let traj = simulate(table.system(), hist, u, r1)?;
    let mut worst = T::zero();
    for r in 0..=r1 as i64 {
        let closed = Matrix::column(closed_form_state(table, hist, u, r)?)?;
        let direct = Matrix::column(traj.state(r).expect("in range").to_vec())?;
        let gap = closed.max_abs_diff(&direct)?;
        if gap > worst {
            worst = gap;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use alloc::vec;

    fn q(x: i64) -> Rational {
        Rational::from_i64(x)
    }

    fn v(xs: &[i64]) -> Vector<Rational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    fn reference() -> (DelaySystem<Rational>, InitialHistory<Rational>) {
        let sys = DelaySystem::new(m(&[&[1, 2], &[0, 1]]), m(&[&[0, 1], &[1, 0]]), m(&[&[1], &[0]]), 1).unwrap();
        let hist = InitialHistory::new(1, vec![v(&[1, 0]), v(&[2, 1])]).unwrap();
        (sys, hist)
    }

    fn controls(us: &[i64]) -> ControlSequence<Rational> {
        ControlSequence::new(1, us.iter().map(|&x| v(&[x])).collect()).unwrap()
    }

    #[test]
    fn simulate_table_rows() {
        let (sys, hist) = reference();
        let traj = simulate(&sys, &hist, &controls(&[6, -2, -2]), 3).unwrap();
        assert_eq!(traj.state(1).unwrap(), v(&[10, 2]).as_slice());
        assert_eq!(traj.state(2).unwrap(), v(&[13, 4]).as_slice());
        assert_eq!(traj.state(3).unwrap(), v(&[21, 14]).as_slice());
        assert_eq!(traj.horizon(), 3);
        assert_eq!(traj.state(-1).unwrap(), v(&[1, 0]).as_slice());

        let traj = simulate(&sys, &hist, &controls(&[6, 3, -7]), 3).unwrap();
        assert_eq!(traj.state(2).unwrap(), v(&[18, 4]).as_slice());
        assert_eq!(traj.terminal(), v(&[21, 14]).as_slice());
    }

    #[test]
    fn zero_dynamics() {
        let (sys, _) = reference();
        let traj = simulate(&sys, &InitialHistory::zeros(1, 2), &ControlSequence::zeros(4, 1), 4).unwrap();
        assert!(traj.iter().all(|(_, s)| s.iter().all(|x| x == &q(0))));
    }

    #[test]
    fn simulate_errors() {
        let (sys, hist) = reference();
        assert_eq!(simulate(&sys, &hist, &controls(&[]), 0), Err(Error::InvalidHorizon(0)));
        assert!(simulate(&sys, &hist, &controls(&[1, 2]), 3).is_err());
        let wide = ControlSequence::new(2, vec![v(&[1, 1])]).unwrap();
        assert!(simulate(&sys, &hist, &wide, 1).is_err());
        let bad_hist = InitialHistory::new(2, vec![v(&[0, 0]), v(&[0, 0]), v(&[0, 0])]).unwrap();
        assert!(simulate(&sys, &bad_hist, &controls(&[1]), 1).is_err());
        assert!(InitialHistory::new(1, vec![v(&[1, 0])]).is_err());
        assert!(InitialHistory::new(1, vec![v(&[1, 0]), v(&[1])]).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let (sys, hist) = reference();
        let mut t = sys.table();
        let u = controls(&[6, -2, -2]);
        assert_eq!(closed_form_state(&mut t, &hist, &u, 0).unwrap(), v(&[2, 1]));
        assert_eq!(closed_form_state(&mut t, &hist, &u, 1).unwrap(), v(&[10, 2]));
        assert_eq!(closed_form_state(&mut t, &hist, &u, 3).unwrap(), v(&[21, 14]));
        assert!(matches!(closed_form_state(&mut t, &hist, &u, 4), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(closed_form_state(&mut t, &hist, &u, -1), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(representation_residual(&mut t, &hist, &u, 3).unwrap(), q(0));
    }

    #[test]
    fn trajectory_recheck() {
        let (sys, hist) = reference();
        let u = controls(&[6, -2, -2]);
        let traj = simulate(&sys, &hist, &u, 3).unwrap();
        assert!(traj.satisfies(&sys, &hist, &u));
        let mut states: Vec<_> = traj.iter().map(|(_, s)| s.to_vec()).collect();
        states[3][0] = q(14);
        let forged = Trajectory::from_states(1, states).unwrap();
        assert!(!forged.satisfies(&sys, &hist, &u));
        assert!(!traj.satisfies(&sys, &hist, &controls(&[6, -2, -1])));
    }
}
