//! File formats and commands behind the `delayctl` binary.

pub mod commands;
pub mod error;
pub mod output;
pub mod plot;
pub mod spec;

pub use error::{CliError, Result};
pub use spec::{Arithmetic, Entry, Problem, SpecFile, Target};
