//! The JSON problem file and its validation into core types.
//!
//! ```json
//! {
//!   "A": [[1, 2], [0, 1]],
//!   "B": [[0, 1], [1, 0]],
//!   "C": [[1], [0]],
//!   "p": 1,
//!   "history": { "-1": [1, 0], "0": [2, 1] },
//!   "target": { "r1": 3, "y": [21, 14] },
//!   "control": [[6], ["-3/2"], ["-5/2"]],
//!   "arithmetic": "rational"
//! }
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use delayctl_core::{ControlSequence, DelaySystem, InitialHistory, Matrix, Scalar, Vector};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// A matrix or vector entry: a bare integer, a rational string, or (only
/// with float arithmetic) a JSON float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
    Float(f64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Rational,
    Float,
}

impl Arithmetic {
    pub fn as_str(self) -> &'static str {
        match self {
            Arithmetic::Rational => "rational",
            Arithmetic::Float => "float",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub r1: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<Entry>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Entry>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<Entry>>,
    pub p: usize,
    /// Keys are the indices `"-p"` through `"0"`.
    pub history: BTreeMap<String, Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Target>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<Vec<Vec<Entry>>>,
    #[serde(default)]
    pub arithmetic: Arithmetic,
}

/// Validated problem data over one scalar field.
#[derive(Clone, Debug)]
pub struct Problem<T> {
    pub system: DelaySystem<T>,
    pub history: InitialHistory<T>,
    pub horizon: Option<usize>,
    pub target: Option<Vector<T>>,
    pub control: Option<ControlSequence<T>>,
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|message| CliError::Parse { path: path.to_path_buf(), message })
    }

    /// Parses JSON text; the error names the offending field and position.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                e.inner().to_string()
            } else {
                format!("at `{path}`: {}", e.inner())
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Arithmetic actually used, honouring a command-line override.
    pub fn mode(&self, force_float: bool) -> Arithmetic {
        if force_float {
            Arithmetic::Float
        } else {
            self.arithmetic
        }
    }

    pub fn validate<T: Scalar>(&self) -> Result<Problem<T>> {
        let floats = self.arithmetic == Arithmetic::Float;
        let a = self.matrix::<T>("A", &self.a, floats)?;
        let b = self.matrix::<T>("B", &self.b, floats)?;
        let c = self.matrix::<T>("C", &self.c, floats)?;
        let d = a.rows();
        if !a.is_square() {
            return Err(invalid(format!("A must be square, found {}x{}", d, a.cols())));
        }
        if b.shape() != (d, d) {
            return Err(invalid(format!("B must be {d}x{d}, found {}x{}", b.rows(), b.cols())));
        }
        if c.rows() != d {
            return Err(invalid(format!("C must have {d} rows, found {}", c.rows())));
        }
        if self.p == 0 {
            return Err(invalid("p must be at least 1".into()));
        }
        let k = c.cols();
        let system = DelaySystem::new(a, b, c, self.p)?;

        let history = self.history::<T>(d, floats)?;

        let horizon = match &self.target {
            Some(t) if t.r1 == 0 => return Err(invalid("target.r1 must be at least 1".into())),
            Some(t) => Some(t.r1),
            None => None,
        };
        let target = match self.target.as_ref().and_then(|t| t.y.as_ref()) {
            Some(y) => Some(vector::<T>("target.y", y, d, floats)?),
            None => None,
        };

        let control = match &self.control {
            Some(rows) => {
                if let Some(r1) = horizon {
                    if rows.len() != r1 {
                        return Err(invalid(format!("control has {} steps, target.r1 needs {r1}", rows.len())));
                    }
                }
                if rows.is_empty() {
                    return Err(invalid("control must have at least one step".into()));
                }
                let values = rows
                    .iter()
                    .enumerate()
                    .map(|(r, u)| vector::<T>(&format!("control[{r}]"), u, k, floats))
                    .collect::<Result<Vec<_>>>()?;
                Some(ControlSequence::new(k, values)?)
            }
            None => None,
        };

        Ok(Problem { system, history, horizon, target, control })
    }

    fn matrix<T: Scalar>(&self, name: &str, rows: &[Vec<Entry>], floats: bool) -> Result<Matrix<T>> {
        let width = rows.first().map_or(0, Vec::len);
        if width == 0 {
            return Err(invalid(format!("{name} must be a non-empty array of non-empty rows")));
        }
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, row)| vector::<T>(&format!("{name}[{i}]"), row, width, floats))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(rows)?)
    }

    fn history<T: Scalar>(&self, d: usize, floats: bool) -> Result<InitialHistory<T>> {
        let p = self.p as i64;
        let mut slots: Vec<Option<Vector<T>>> = vec![None; self.p + 1];
        for (key, value) in &self.history {
            let r: i64 =
                key.trim().parse().map_err(|_| invalid(format!("history key {key:?} is not an integer index")))?;
            if !(-p..=0).contains(&r) {
                return Err(invalid(format!("history index {r} outside [-{p}, 0]")));
            }
            let slot = &mut slots[(r + p) as usize];
            if slot.is_some() {
                return Err(invalid(format!("history index {r} given twice")));
            }
            *slot = Some(vector::<T>(&format!("history[{key:?}]"), value, d, floats)?);
        }
        let values = slots
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| invalid(format!("history is missing index {}", i as i64 - p))))
            .collect::<Result<Vec<_>>>()?;
        Ok(InitialHistory::new(self.p, values)?)
    }
}

fn invalid(message: String) -> CliError {
    CliError::Invalid(message)
}

fn vector<T: Scalar>(name: &str, entries: &[Entry], len: usize, floats: bool) -> Result<Vector<T>> {
    if entries.len() != len {
        return Err(invalid(format!("{name} has {} entries, expected {len}", entries.len())));
    }
    entries
        .iter()
        .enumerate()
        .map(|(j, e)| entry::<T>(e, floats).map_err(|m| invalid(format!("{name}[{j}]: {m}"))))
        .collect()
}

fn entry<T: Scalar>(e: &Entry, floats: bool) -> std::result::Result<T, String> {
    match e {
        Entry::Int(v) => Ok(T::from_i64(*v)),
        Entry::Text(s) => T::parse(s).ok_or_else(|| format!("cannot parse {s:?} as a number")),
        Entry::Float(v) if floats => T::from_f64(*v).ok_or_else(|| format!("{v} is not finite")),
        Entry::Float(v) => Err(format!("float {v} needs \"arithmetic\": \"float\"; write rationals as \"n/m\"")),
    }
}
