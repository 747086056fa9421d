//! Configuration parsing, scenario dispatch and CSV output for the `qthermo` binary.

mod config;
mod output;
mod run;

pub use config::{
    config_from_table, parse_config, scenario_defaults, ConfigError, RunConfig, Scenario, ScenarioSetup,
    CHECK_IDS, CLOCK_STEPS, DEFAULT_STEPS, RAMP_STEPS,
};
pub use output::{format_number, write_report_csv, write_series_csv, COLUMNS};
pub use run::{execute, parse_assignment, resolve_config, run, NamedReport, Overrides, RunError, RunOutcome, EXIT_CHECK_FAILED};
