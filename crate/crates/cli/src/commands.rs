//! The four subcommands. Each loads the spec, picks the scalar field and
//! returns what should go to stdout together with the exit code.

use std::fs;
use std::path::Path;

use delayctl_core::{
    analyze as analyze_system, gramian, simulate as run_simulation, synthesize as synthesize_plan, verify_plan,
    Rational, Scalar, Verdict,
};

use crate::error::{CliError, Result};
use crate::output::{to_json, trajectory_csv, vector_str, AnalysisReport, PlanReport};
use crate::plot;
use crate::spec::{Arithmetic, SpecFile};

pub const PLAN_FILE: &str = "plan.json";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

macro_rules! dispatch {
    ($mode:expr, $f:ident($($arg:expr),*)) => {
        match $mode {
            Arithmetic::Rational => $f::<Rational>($($arg),*),
            Arithmetic::Float => $f::<f64>($($arg),*),
        }
    };
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Controllability report. Exits 3 when the verdict is not `controllable`.
pub fn analyze(spec_path: &Path, force_float: bool, json: bool) -> Result<Outcome> {
    let spec = SpecFile::load(spec_path)?;
    let mode = spec.mode(force_float);
    dispatch!(mode, analyze_in(&spec, mode, json))
}

fn analyze_in<T: Scalar>(spec: &SpecFile, mode: Arithmetic, json: bool) -> Result<Outcome> {
    let problem = spec.validate::<T>()?;
    let mut table = problem.system.table();
    let report = analyze_system(&mut table, problem.horizon);
    let gram = problem.horizon.map(|r1| gramian(&mut table, r1)).transpose()?;
    let out = AnalysisReport::new(mode, &report, gram.as_ref());
    let stdout = if json { to_json(&out) } else { out.to_text() };
    let code = if report.verdict == Verdict::Controllable { 0 } else { 3 };
    Ok(Outcome { stdout, code })
}

/// Writes `plan.json` and `trajectory.csv` into `out_dir`.
pub fn synthesize(spec_path: &Path, force_float: bool, out_dir: &Path) -> Result<Outcome> {
    let spec = SpecFile::load(spec_path)?;
    let mode = spec.mode(force_float);
    dispatch!(mode, synthesize_in(&spec, mode, out_dir))
}

fn synthesize_in<T: Scalar>(spec: &SpecFile, mode: Arithmetic, out_dir: &Path) -> Result<Outcome> {
    let problem = spec.validate::<T>()?;
    let (Some(r1), Some(target)) = (problem.horizon, problem.target.as_ref()) else {
        return Err(CliError::Invalid("synthesize needs target.r1 and target.y".into()));
    };
    let mut table = problem.system.table();
    let plan = synthesize_plan(&mut table, &problem.history, target, r1)?;
    let verified = verify_plan(&table, &problem.history, &plan, target);

    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let report = PlanReport::new(mode, &plan, target, verified);
    write_file(&out_dir.join(PLAN_FILE), to_json(&report).as_bytes())?;
    write_file(&out_dir.join(TRAJECTORY_FILE), &trajectory_csv(&plan.trajectory, &plan.control))?;

    let controls: Vec<String> = plan.control.values().iter().map(|u| vector_str(u)).collect();
    let stdout = format!(
        "u*         {}\ny({r1})       {}\nverified   {verified}\n",
        controls.join(" "),
        vector_str(&plan.achieved_state)
    );
    Ok(Outcome::ok(stdout))
}

/// Runs the spec's control sequence and writes the trajectory CSV, plus an
/// SVG plot when `plot_path` is given.
pub fn simulate(spec_path: &Path, force_float: bool, out: &Path, plot_path: Option<&Path>) -> Result<Outcome> {
    let spec = SpecFile::load(spec_path)?;
    let mode = spec.mode(force_float);
    dispatch!(mode, simulate_in(&spec, out, plot_path))
}

fn simulate_in<T: Scalar>(spec: &SpecFile, out: &Path, plot_path: Option<&Path>) -> Result<Outcome> {
    let problem = spec.validate::<T>()?;
    let Some(control) = problem.control.as_ref() else {
        return Err(CliError::Invalid("simulate needs a control sequence".into()));
    };
    let r1 = problem.horizon.unwrap_or(control.len());
    let traj = run_simulation(&problem.system, &problem.history, control, r1)?;
    write_file(out, &trajectory_csv(&traj, control))?;
    if let Some(path) = plot_path {
        write_file(path, plot::render(&traj).as_bytes())?;
    }
    let mut stdout = format!("y({r1})       {}\n", vector_str(traj.terminal()));
    if let Some(target) = &problem.target {
        let hit = traj.terminal().iter().zip(target).all(|(a, b)| (a.clone() - b.clone()).is_negligible());
        stdout.push_str(&format!("target     {} ({})\n", vector_str(target), if hit { "reached" } else { "missed" }));
    }
    Ok(Outcome::ok(stdout))
}

/// Prints `Y(r)` and every `Q(r, i)`, `0 ≤ i ≤ r`, for `r ∈ [from, to]`.
pub fn kernel(spec_path: &Path, force_float: bool, from: i64, to: i64) -> Result<Outcome> {
    if from > to {
        return Err(CliError::Invalid(format!("empty range: --from {from} is after --to {to}")));
    }
    let spec = SpecFile::load(spec_path)?;
    let mode = spec.mode(force_float);
    dispatch!(mode, kernel_in(&spec, from, to))
}

fn kernel_in<T: Scalar>(spec: &SpecFile, from: i64, to: i64) -> Result<Outcome> {
    let problem = spec.validate::<T>()?;
    let mut table = problem.system.table();
    let mut out = String::new();
    for r in from..=to {
        out.push_str(&format!("Y({r}) = {}\n", table.y_value(r)));
        for i in 0..=r {
            out.push_str(&format!("  Q({r},{i}) = {}\n", table.q_value(r, i)));
        }
    }
    Ok(Outcome::ok(out))
}
