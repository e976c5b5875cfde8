//! Explicit steering control `u*(r) = Cᵀ Y(r1-p-r-1)ᵀ Γ⁻¹ η`.

use alloc::vec::Vec;

use crate::controllability::{gramian, rank_condition, steering_vector, system_minimal_horizon, Gramian};
use crate::error::{Error, Result};
use crate::kernel::KernelTable;
use crate::matrix::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::system::{simulate, ControlSequence, InitialHistory, Trajectory};

#[derive(Clone, Debug, PartialEq)]
pub struct SteeringPlan<T> {
    pub horizon: usize,
    pub eta: Vector<T>,
    pub gramian: Gramian<T>,
    /// `Γ⁻¹ η`.
    pub multiplier: Vector<T>,
    pub control: ControlSequence<T>,
    pub trajectory: Trajectory<T>,
    pub achieved_state: Vector<T>,
    /// Largest componentwise `|y(r1) - y*|`.
    pub residual: T,
}

/// Builds the Gramian control steering `hist` to `target` at `r1` and
/// simulates it.
///
/// Requires `rank(S) = d` and `r1 ≥ r*`; both are checked up front.
pub fn synthesize<T: Scalar>(
    table: &mut KernelTable<'_, T>,
    hist: &InitialHistory<T>,
    target: &[T],
    r1: usize,
) -> Result<SteeringPlan<T>> {
    if r1 == 0 {
        return Err(Error::InvalidHorizon(r1));
    }
    let sys = table.system();
    let (rank, holds) = rank_condition(table);
    if !holds {
        return Err(Error::NotControllable { rank, dim: sys.dim() });
    }
    let minimal = system_minimal_horizon(sys);
    if r1 < minimal {
        return Err(Error::HorizonTooShort { horizon: r1, minimal });
    }
    let eta = steering_vector(table, hist, target, r1)?;
    let gram = gramian(table, r1)?;
    let multiplier = match gram.matrix.solve(&Matrix::column(eta.clone())?) {
        Ok(x) => x.col(0),
        Err(Error::Singular) => return Err(Error::SingularGramian { horizon: r1 }),
        Err(e) => return Err(e),
    };
    let p = sys.delay() as i64;
    let ct = sys.c().transpose();
    let control: Vec<Vector<T>> = (0..r1 as i64)
        .map(|r| {
            let yt = table.y_value(r1 as i64 - p - r - 1).transpose();
            ct.mul(&yt).and_then(|m| m.mul_vec(&multiplier))
        })
        .collect::<Result<_>>()?;
    let control = ControlSequence::new(sys.inputs(), control)?;
    let trajectory = simulate(sys, hist, &control, r1)?;
    let achieved_state = trajectory.terminal().to_vec();
    let residual = max_gap(&achieved_state, target);
    Ok(SteeringPlan { horizon: r1, eta, gramian: gram, multiplier, control, trajectory, achieved_state, residual })
}

/// Re-simulates `plan.control` from `hist` and checks that the history is
/// reproduced and `target` is hit at the plan's horizon.
pub fn verify_plan<T: Scalar>(
    table: &KernelTable<'_, T>,
    hist: &InitialHistory<T>,
    plan: &SteeringPlan<T>,
    target: &[T],
) -> bool {
    let sys = table.system();
    let Ok(traj) = simulate(sys, hist, &plan.control, plan.horizon) else {
        return false;
    };
    let p = sys.delay() as i64;
    let hist_ok = (-p..=0).all(|r| match (traj.state(r), hist.at(r)) {
        (Some(a), Some(b)) => max_gap(a, b).is_negligible(),
        _ => false,
    });
    hist_ok && traj.terminal().len() == target.len() && max_gap(traj.terminal(), target).is_negligible()
}

fn max_gap<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |worst, (x, y)| {
        let g = (x.clone() - y.clone()).abs();
        if g > worst {
            g
        } else {
            worst
        }
    })
}
