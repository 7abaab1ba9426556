//! Experiment runner for the `vortinv` solvers: configuration parsing, field
//! files, and the `forward`, `inverse`, `verify`, `stability`, and
//! `convergence` commands.

pub mod config;
pub mod error;
pub mod fieldio;
pub mod fixture;
pub mod output;
pub mod run;

pub use config::{parse_config, parse_entries, Command, RunConfig};
pub use error::{CliError, Result};
pub use fieldio::{parse_field_csv, write_field_csv};
pub use fixture::parse_fixture_spec;
pub use run::{convergence_study, run, ConvergenceRow, RunSummary};
