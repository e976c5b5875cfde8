//! Serialized reports, trajectory CSV and plain-text rendering.
//!
//! Every number is written through the scalar's `Display`: `n` or `n/m` in
//! rational mode, shortest round-trip decimal in float mode.

use std::fmt::Display;

use delayctl_core::{ControlSequence, ControllabilityReport, Gramian, Matrix, Scalar, SteeringPlan, Trajectory};
use serde::Serialize;

use crate::spec::Arithmetic;

pub fn vector_str<T: Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn strings<T: Display>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn matrix_strings<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| strings(m.row(i))).collect()
}

#[derive(Debug, Serialize)]
pub struct Shape {
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Serialize)]
pub struct GramianReport {
    pub horizon: usize,
    pub entries: Vec<Vec<String>>,
    pub determinant: String,
    pub positive_definite: bool,
}

impl GramianReport {
    pub fn new<T: Scalar>(g: &Gramian<T>) -> Self {
        let det = g.matrix.determinant().expect("Gramian is square");
        GramianReport {
            horizon: g.horizon,
            entries: matrix_strings(&g.matrix),
            determinant: det.to_string(),
            positive_definite: g.positive_definite,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub arithmetic: &'static str,
    pub dim: usize,
    pub inputs: usize,
    pub effective_inputs: usize,
    pub delay: usize,
    #[serde(rename = "S")]
    pub kalman: Shape,
    pub rank: usize,
    pub r_star: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gramian: Option<GramianReport>,
}

impl AnalysisReport {
    pub fn new<T: Scalar>(mode: Arithmetic, r: &ControllabilityReport<T>, gramian: Option<&Gramian<T>>) -> Self {
        AnalysisReport {
            arithmetic: mode.as_str(),
            dim: r.dim,
            inputs: r.inputs,
            effective_inputs: r.effective_inputs,
            delay: r.delay,
            kalman: Shape { rows: r.kalman.rows(), cols: r.kalman.cols() },
            rank: r.rank,
            r_star: r.r_star,
            horizon: r.horizon,
            verdict: r.verdict.as_str(),
            reason: r.verdict.reason(),
            gramian: gramian.map(GramianReport::new),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "system     d = {}, k = {} (effective {}), p = {}, {} arithmetic\n",
            self.dim, self.inputs, self.effective_inputs, self.delay, self.arithmetic
        ));
        out.push_str(&format!("S          {}x{}, rank {}\n", self.kalman.rows, self.kalman.cols, self.rank));
        out.push_str(&format!("r*         {}\n", self.r_star));
        if let Some(r1) = self.horizon {
            out.push_str(&format!("horizon    {r1}\n"));
        }
        if let Some(g) = &self.gramian {
            let rows: Vec<String> = g.entries.iter().map(|r| format!("[{}]", r.join(", "))).collect();
            out.push_str(&format!(
                "gramian    [{}], det {}, {}\n",
                rows.join(", "),
                g.determinant,
                if g.positive_definite { "positive definite" } else { "not positive definite" }
            ));
        }
        match self.reason {
            Some(reason) => out.push_str(&format!("verdict    {} ({reason})\n", self.verdict)),
            None => out.push_str(&format!("verdict    {}\n", self.verdict)),
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct PlanReport {
    pub arithmetic: &'static str,
    pub horizon: usize,
    pub target: Vec<String>,
    pub eta: Vec<String>,
    pub gramian: GramianReport,
    /// `Γ⁻¹ η`.
    pub multiplier: Vec<String>,
    pub control: Vec<Vec<String>>,
    pub achieved_state: Vec<String>,
    pub residual: String,
    pub verified: bool,
}

impl PlanReport {
    pub fn new<T: Scalar>(mode: Arithmetic, plan: &SteeringPlan<T>, target: &[T], verified: bool) -> Self {
        PlanReport {
            arithmetic: mode.as_str(),
            horizon: plan.horizon,
            target: strings(target),
            eta: strings(&plan.eta),
            gramian: GramianReport::new(&plan.gramian),
            multiplier: strings(&plan.multiplier),
            control: plan.control.values().iter().map(|u| strings(u)).collect(),
            achieved_state: strings(&plan.achieved_state),
            residual: plan.residual.to_string(),
            verified,
        }
    }
}

pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Trajectory as CSV with header `r,y_1..y_d,u_1..u_k`, one row per
/// `r ∈ [-p, r1]`. Row `r` carries `u(r)` for `0 ≤ r < r1`; the input cells
/// are blank on the history rows and the terminal row.
pub fn trajectory_csv<T: Scalar>(traj: &Trajectory<T>, control: &ControlSequence<T>) -> Vec<u8> {
    let d = traj.terminal().len();
    let k = control.inputs();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["r".to_string()];
    header.extend((1..=d).map(|i| format!("y_{i}")));
    header.extend((1..=k).map(|i| format!("u_{i}")));
    w.write_record(&header).expect("in-memory write");
    for (r, y) in traj.iter() {
        let mut row = vec![r.to_string()];
        row.extend(strings(y));
        if r >= 0 && (r as usize) < control.len() {
            row.extend(strings(control.at(r as usize)));
        } else {
            row.extend(std::iter::repeat_n(String::new(), k));
        }
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}
