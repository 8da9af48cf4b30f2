//! Configuration, sweeps and output for the `casimir` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{
    conductivity_rows, fluctuation_study, run, sweep_rows, Command, ConductivityRow, Curve,
    FluctuationRow, FluctuationStudy, PressureRow, RunOptions, ScalingFit, SweepRow,
};
pub use config::{parse_config, ConfigError, Format, GridPoint, RunConfig};
pub use error::{CliError, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_IO};
