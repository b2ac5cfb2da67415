//! Front end for the `qlmc` binary: sweep specifications, the commands and
//! their CSV output.

pub mod commands;
pub mod csvfmt;
pub mod spec;

pub use commands::{
    cmd_density, cmd_molecules_list, cmd_sweep, cmd_table1, density_slices, sweep_rows, table1_deviations, table1_rows,
    Settings, State, TABLE1_REFERENCE, TABLE1_TOLERANCE,
};
pub use spec::{Config, Output, SweepOverrides, SweepSpec, System};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid sweep specification: {0}")]
    Spec(String),
    #[error("numerical failure at n = {n}, q = {q}: {source}")]
    Numerical {
        n: u32,
        q: f64,
        #[source]
        source: qlmc::Error,
    },
    #[error("table deviates from reference:\n{}", .0.join("\n"))]
    Deviation(Vec<String>),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Numerical { .. } | CliError::Deviation(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}
