use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::config::{config_from_table, ConfigError, RunConfig, ScenarioSetup, RAMP_STEPS};
use super::output::{write_report_csv, write_series_csv};
use crate::dynamics::{GateShape, TimeGrid};
use crate::error::Error;
use crate::machines::{
    clock_machine, counterexample_qutrit, first_peak, passive_extraction, refined_bounds, run_engine, run_refrigerator,
    sweep_coupling, MachineReport,
};

/// Failure of a run, other than a failed inequality.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("simulation failed: {0}")]
    Simulation(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl RunError {
    /// Process exit status: 2 for I/O failures, 3 for invalid configurations.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io { .. } => 2,
            RunError::Config(_) | RunError::Simulation(_) => 3,
        }
    }
}

/// Exit status when every run succeeded but an asserted inequality failed.
pub const EXIT_CHECK_FAILED: i32 = 1;

/// One report together with the file it is written to.
#[derive(Clone, Debug)]
pub struct NamedReport {
    pub name: String,
    pub report: MachineReport,
    pub with_w_c: bool,
}

/// Result of [`run`].
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub reports: Vec<NamedReport>,
    pub files: Vec<PathBuf>,
    pub passed: bool,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

fn named(name: &str, report: MachineReport) -> NamedReport {
    NamedReport { name: name.to_string(), report, with_w_c: false }
}

/// Runs the configured scenario without writing anything.
pub fn execute(config: &RunConfig) -> Result<Vec<NamedReport>, Error> {
    let grid = || TimeGrid::uniform(config.t_max, config.n_steps + 1);
    let name = config.scenario.name();
    let mut out = match &config.setup {
        ScenarioSetup::Refrigerator(p) => vec![named(name, refined_bounds(run_refrigerator(p, &grid()?)?)?)],
        ScenarioSetup::Engine(p) => vec![named(name, refined_bounds(run_engine(p, &grid()?)?)?)],
        ScenarioSetup::Sweep { base, gx } => sweep_coupling(base, gx, &grid()?)?
            .into_iter()
            .zip(gx)
            .map(|(r, g)| named(&format!("{name}_gx{g:.2}"), r))
            .collect(),
        ScenarioSetup::Refined { refrigerator, engine } => {
            let g = grid()?;
            vec![
                named(&format!("{name}_refrigerator"), refined_bounds(run_refrigerator(refrigerator, &g)?)?),
                named(&format!("{name}_engine"), refined_bounds(run_engine(engine, &g)?)?),
            ]
        }
        ScenarioSetup::Counterexample(p) => vec![named(name, counterexample_qutrit(p, &grid()?)?)],
        ScenarioSetup::PassiveQudit { spec, engine } => vec![named(name, passive_extraction(spec, engine, &grid()?)?)],
        ScenarioSetup::Clock { engine, schedule } => {
            let g = match schedule.shape {
                GateShape::Zero => grid()?,
                _ => {
                    let coarse = (config.n_steps.saturating_sub(2 * RAMP_STEPS) / 3).max(1);
                    schedule.adapted_grid(config.t_max, coarse, RAMP_STEPS)?
                }
            };
            let report = clock_machine(&engine.system()?, schedule, &g)?;
            vec![NamedReport { name: name.to_string(), report, with_w_c: true }]
        }
    };
    for n in &mut out {
        apply_tolerances(&mut n.report, config);
    }
    Ok(out)
}

fn apply_tolerances(report: &mut MachineReport, config: &RunConfig) {
    for check in report.checks.iter_mut().filter(|c| !c.diagnostic) {
        if let Some(&tol) = config.tolerances.get(&check.id) {
            check.tolerance = tol;
            check.passed = check.worst <= tol;
        }
    }
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> io::Result<()>) -> Result<(), RunError> {
    let io_err = |source| RunError::Io { path: path.to_path_buf(), source };
    let file = fs::File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    f(&mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

fn summarize<W: Write>(n: &NamedReport, log: &mut W) -> io::Result<()> {
    let r = &n.report;
    writeln!(log, "{}: {} samples, Omega = {:.6} (energies in units of omega_A)", n.name, r.rows.len(), r.omega)?;
    for c in &r.checks {
        let tag = match (c.diagnostic, c.passed) {
            (true, _) => "INFO",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        if c.diagnostic {
            writeln!(log, "  {tag} {:<22} value {:.3e} ({})  {}", c.id, c.worst, if c.passed { "as expected" } else { "unexpected" }, c.description)?;
        } else {
            writeln!(log, "  {tag} {:<22} max residual {:.3e} (tol {:.1e})  {}", c.id, c.worst, c.tolerance, c.description)?;
        }
    }
    if let Some(s) = &r.swap {
        let min_erg = r.sigma_erg.as_ref().map_or(f64::NAN, |e| e.iter().cloned().fold(f64::INFINITY, f64::min));
        let min_a = r.rows.iter().map(|row| row.subsystems[0].sigma).fold(f64::INFINITY, f64::min);
        writeln!(log, "  sigma_erg min {min_erg:.6e}, at swap time {:.6e}", s.sigma_erg)?;
        writeln!(log, "  sigma_A min {min_a:.6e}, at swap time {:.6e}", s.sigma_a)?;
    }
    if let Some(b) = &r.block {
        writeln!(log, "  beta_2 = {:.6}, active-block weight {:.6}", b.beta_2, b.block_weight)?;
    }
    if let Some(c) = &r.clock {
        writeln!(log, "  W_C(t_end) = {:.9e}, sum of local energy changes = {:.9e}", c.w_c_end, c.local_energy_change)?;
    }
    if r.fom_kind.is_some() {
        match first_peak(r) {
            Some((t, v)) => writeln!(log, "  first figure-of-merit peak {v:.6e} at t = {t:.6}")?,
            None => writeln!(log, "  no figure-of-merit peak on the grid")?,
        }
    }
    Ok(())
}

/// Runs the scenario, writes one CSV per report into the output directory and prints a
/// PASS/FAIL line per asserted inequality to `log`.
pub fn run<W: Write>(config: &RunConfig, log: &mut W) -> Result<RunOutcome, RunError> {
    let reports = execute(config)?;
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.clone(), source })?;
    let mut files = Vec::new();
    for n in &reports {
        let path = dir.join(format!("{}.csv", n.name));
        write_file(&path, |w| write_report_csv(&n.report, n.with_w_c, w))?;
        files.push(path);
        if let Some(erg) = &n.report.sigma_erg {
            let path = dir.join(format!("{}_sigma_erg.csv", n.name));
            write_file(&path, |w| write_series_csv("sigma_erg", &n.report.times(), erg, w))?;
            files.push(path);
        }
    }
    let stdout_err = |source| RunError::Io { path: PathBuf::from("<log>"), source };
    for n in &reports {
        summarize(n, log).map_err(stdout_err)?;
    }
    let passed = reports.iter().all(|n| n.report.passed());
    writeln!(log, "{}", if passed { "all checks passed" } else { "some checks FAILED" }).map_err(stdout_err)?;
    Ok(RunOutcome { reports, files, passed })
}

/// Parses a `key=value` override; the value is read as a TOML scalar, falling back to a string.
pub fn parse_assignment(s: &str) -> Result<(String, toml::Value), ConfigError> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| ConfigError::Parse(format!("override `{s}` is not of the form key=value")))?;
    let key = key.trim().to_string();
    let value = value.trim();
    let parsed = format!("v = {value}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    Ok((key, parsed))
}

/// Command-line inputs merged in order: config file, scenario, `--set` pairs, explicit flags.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub config_text: Option<String>,
    pub scenario: Option<String>,
    pub sets: Vec<String>,
    pub steps: Option<usize>,
    pub t_max: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

pub fn resolve_config(o: &Overrides) -> Result<RunConfig, ConfigError> {
    let mut table = match &o.config_text {
        Some(text) => text.parse::<toml::Table>().map_err(|e| ConfigError::Parse(e.message().to_string()))?,
        None => toml::Table::new(),
    };
    if let Some(s) = &o.scenario {
        table.insert("scenario".into(), toml::Value::String(s.clone()));
    }
    for s in &o.sets {
        let (k, v) = parse_assignment(s)?;
        table.insert(k, v);
    }
    if let Some(n) = o.steps {
        table.insert("n_steps".into(), toml::Value::Integer(n as i64));
    }
    if let Some(t) = o.t_max {
        table.insert("t_max".into(), toml::Value::Float(t));
    }
    if let Some(d) = &o.output_dir {
        table.insert("output_dir".into(), toml::Value::String(d.to_string_lossy().into_owned()));
    }
    config_from_table(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignments() {
        assert_eq!(parse_assignment("g=0.5").unwrap(), ("g".into(), toml::Value::Float(0.5)));
        assert_eq!(parse_assignment("d = 4").unwrap(), ("d".into(), toml::Value::Integer(4)));
        assert_eq!(parse_assignment("gate=smooth").unwrap(), ("gate".into(), toml::Value::String("smooth".into())));
        assert!(parse_assignment("novalue").is_err());
    }

    #[test]
    fn flags_override_file() {
        let o = Overrides {
            config_text: Some("scenario = \"fig3\"\nn_steps = 10".into()),
            scenario: Some("fig2".into()),
            steps: Some(20),
            ..Overrides::default()
        };
        let cfg = resolve_config(&o).unwrap();
        assert_eq!(cfg.scenario.name(), "fig2");
        assert_eq!(cfg.n_steps, 20);
    }

    #[test]
    fn tolerance_override_rejudges() {
        let o = Overrides { scenario: Some("fig3".into()), sets: vec!["tol_carnot=0".into(), "n_steps=50".into()], ..Overrides::default() };
        let cfg = resolve_config(&o).unwrap();
        let reports = execute(&cfg).unwrap();
        let carnot = reports[0].report.check("carnot").unwrap();
        assert_eq!(carnot.tolerance, 0.0);
        assert_eq!(carnot.passed, carnot.worst <= 0.0);
    }
}
