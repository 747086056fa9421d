use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qthermo::acceptance::run_all;
use qthermo::cli::{resolve_config, run, scenario_defaults, Overrides, RunError, Scenario};

#[derive(Parser)]
#[command(name = "qthermo", version, about = "Heat, work and entropy-production ledger for small quantum machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario, write its CSV ledger and print a PASS/FAIL line per check.
    Run {
        /// fig2, fig3, fig4, fig5, appB, appH, appI or custom.
        scenario: Option<String>,
        /// Flat TOML configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of time steps.
        #[arg(long)]
        steps: Option<usize>,
        /// Final time, in units of 1 / omega_A.
        #[arg(long)]
        tmax: Option<f64>,
        /// Parameter override, `key=value`; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// List scenarios and their default parameters.
    List,
    /// Run the acceptance suite.
    Check,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { scenario, config, out, steps, tmax, sets } => {
            let config_text = match config.map(|p| fs::read_to_string(&p).map_err(|e| (p, e))).transpose() {
                Ok(t) => t,
                Err((path, source)) => {
                    let err = RunError::Io { path, source };
                    eprintln!("error: {err}");
                    return code(err.exit_code());
                }
            };
            let overrides = Overrides { config_text, scenario, sets, steps, t_max: tmax, output_dir: out };
            let result = resolve_config(&overrides).map_err(RunError::from).and_then(|cfg| run(&cfg, &mut io::stdout()));
            match result {
                Ok(outcome) => {
                    for f in &outcome.files {
                        println!("wrote {}", f.display());
                    }
                    code(outcome.exit_code())
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    code(err.exit_code())
                }
            }
        }
        Command::List => {
            let mut out = io::stdout().lock();
            for s in Scenario::ALL {
                let _ = writeln!(out, "{:<7} {}", s.name(), s.summary());
                for (k, v) in scenario_defaults(s) {
                    let _ = writeln!(out, "        {k} = {v}");
                }
            }
            ExitCode::SUCCESS
        }
        Command::Check => {
            let results = run_all();
            for r in &results {
                println!("{r}");
            }
            if results.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                code(1)
            }
        }
    }
}
