use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;
use toml::Value;

use crate::dynamics::{GateSchedule, GateShape};
use crate::machines::QutritSwapParams;
use crate::models::{Coupling, PassiveQuditSpec, TwoQubitParams};

/// Configuration problems; each names the offending key.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot parse configuration: {0}")]
    Parse(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}` does not apply to scenario {scenario}")]
    NotApplicable { key: String, scenario: Scenario },
    #[error("missing required key(s): {}", .0.join(", "))]
    MissingKeys(Vec<String>),
    #[error("key `{key}` must be {expected}")]
    TypeMismatch { key: String, expected: &'static str },
    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },
}

type ConfigResult<T> = std::result::Result<T, ConfigError>;

/// Shipped scenarios.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scenario {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    AppB,
    AppH,
    AppI,
    Custom,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Fig2,
        Scenario::Fig3,
        Scenario::Fig4,
        Scenario::Fig5,
        Scenario::AppB,
        Scenario::AppH,
        Scenario::AppI,
        Scenario::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fig2 => "fig2",
            Scenario::Fig3 => "fig3",
            Scenario::Fig4 => "fig4",
            Scenario::Fig5 => "fig5",
            Scenario::AppB => "appB",
            Scenario::AppH => "appH",
            Scenario::AppI => "appI",
            Scenario::Custom => "custom",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Scenario::Fig2 => "two-qubit refrigerator, exchange coupling, B rotated about x",
            Scenario::Fig3 => "two-qubit engine, xy coupling, thermal qubits",
            Scenario::Fig4 => "engine efficiency for a sweep of the x coupling",
            Scenario::Fig5 => "refined Carnot bounds for the refrigerator and the engine",
            Scenario::AppB => "qutrit swap with a passive non-thermal partner",
            Scenario::AppH => "engine with a passive qudit as hot source",
            Scenario::AppI => "engine with clock-switched coupling",
            Scenario::Custom => "user-defined two-qubit refrigerator or engine",
        }
    }

    /// Physics keys accepted by this scenario.
    fn keys(self) -> &'static [&'static str] {
        const FIG3: &[&str] = &["omega_a", "omega_b", "beta_a", "beta_b", "gx", "gy", "phi"];
        match self {
            Scenario::Fig2 => &["omega_a", "omega_b", "beta_a", "beta_b", "g", "phi"],
            Scenario::Fig3 => FIG3,
            Scenario::Fig4 => &["omega_a", "omega_b", "beta_a", "beta_b", "gy", "phi", "gx_start", "gx_stop", "gx_step"],
            Scenario::Fig5 => &[],
            Scenario::AppB => &["omega_0", "omega_1", "omega_2", "beta_1", "beta_2", "beta_a", "g"],
            Scenario::AppH => &["omega_a", "omega_b", "beta_a", "beta_b", "gx", "gy", "d", "omega_2"],
            Scenario::AppI => &[
                "omega_a", "omega_b", "beta_a", "beta_b", "gx", "gy", "phi", "gate", "gate_on", "gate_off", "ramp", "speed",
            ],
            Scenario::Custom => &["omega_a", "omega_b", "beta_a", "beta_b", "g", "gx", "gy", "phi", "machine"],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = ConfigError;

    fn from_str(s: &str) -> ConfigResult<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| ConfigError::InvalidValue { key: "scenario".into(), reason: format!("unknown scenario `{s}`") })
    }
}

/// Fully resolved scenario parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioSetup {
    Refrigerator(TwoQubitParams),
    Engine(TwoQubitParams),
    Sweep { base: TwoQubitParams, gx: Vec<f64> },
    Refined { refrigerator: TwoQubitParams, engine: TwoQubitParams },
    Counterexample(QutritSwapParams),
    PassiveQudit { spec: PassiveQuditSpec, engine: TwoQubitParams },
    Clock { engine: TwoQubitParams, schedule: GateSchedule },
}

/// Validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub setup: ScenarioSetup,
    pub t_max: f64,
    /// Number of time steps; the grid has `n_steps + 1` points.
    pub n_steps: usize,
    pub output_dir: PathBuf,
    /// Tolerance overrides keyed by check id.
    pub tolerances: BTreeMap<String, f64>,
}

/// Check ids whose tolerance may be overridden with `tol_<id>`.
pub const CHECK_IDS: &[&str] = &[
    "sigma",
    "clausius",
    "tighter_sigma",
    "tighter_clausius",
    "second_law_identity",
    "thermal_identity",
    "energy_balance",
    "free_energy_A",
    "free_energy_B",
    "hierarchy_A",
    "hierarchy_B",
    "carnot",
    "cop_chain",
    "single_temperature",
    "refined_lower",
    "refined_upper",
    "average_beta_range",
    "swap_sigma_a",
    "swap_sigma_erg",
    "qudit_initial",
    "active_block_work",
    "marginal_mixture",
    "block_diagonal",
    "clock_work",
    "switching",
];

const GRID_KEYS: &[&str] = &["scenario", "t_max", "n_steps", "output_dir"];
/// Default number of steps for the two-body scenarios.
pub const DEFAULT_STEPS: usize = 2000;
/// Default number of steps for the clock scenario.
pub const CLOCK_STEPS: usize = 10_000;
/// Steps across each switching ramp of the clock scenario.
pub const RAMP_STEPS: usize = 50;

struct Keys {
    map: BTreeMap<String, Value>,
}

impl Keys {
    fn num(&self, key: &str) -> ConfigResult<Option<f64>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(ConfigError::TypeMismatch { key: key.into(), expected: "a number" }),
        }
    }

    fn num_or(&self, key: &str, default: f64) -> ConfigResult<f64> {
        Ok(self.num(key)?.unwrap_or(default))
    }

    fn int(&self, key: &str) -> ConfigResult<Option<i64>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) => Ok(Some(*i)),
            Some(Value::Float(x)) if x.fract() == 0.0 && x.abs() < 1e15 => Ok(Some(*x as i64)),
            Some(_) => Err(ConfigError::TypeMismatch { key: key.into(), expected: "an integer" }),
        }
    }

    fn string(&self, key: &str) -> ConfigResult<Option<String>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(ConfigError::TypeMismatch { key: key.into(), expected: "a string" }),
        }
    }
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue { key: key.into(), reason: reason.into() }
}

/// Parses a flat TOML document (`key = value`, `#` comments).
pub fn parse_config(text: &str) -> ConfigResult<RunConfig> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.message().to_string()))?;
    config_from_table(table)
}

/// Builds a config from already parsed key/value pairs (after command-line overrides).
pub fn config_from_table(table: toml::Table) -> ConfigResult<RunConfig> {
    let mut map = BTreeMap::new();
    for (k, v) in table {
        if matches!(v, Value::Table(_) | Value::Array(_) | Value::Datetime(_)) {
            return Err(ConfigError::TypeMismatch { key: k, expected: "a number, string or boolean" });
        }
        map.insert(k, v);
    }
    let keys = Keys { map };
    let scenario: Scenario = keys
        .string("scenario")?
        .ok_or_else(|| ConfigError::MissingKeys(vec!["scenario".into()]))?
        .parse()?;

    let mut tolerances = BTreeMap::new();
    for key in keys.map.keys() {
        if GRID_KEYS.contains(&key.as_str()) || scenario.keys().contains(&key.as_str()) {
            continue;
        }
        if let Some(id) = key.strip_prefix("tol_") {
            if !CHECK_IDS.contains(&id) {
                return Err(ConfigError::UnknownKey(key.clone()));
            }
            let tol = keys.num(key)?.expect("present");
            if !(tol >= 0.0) || !tol.is_finite() {
                return Err(invalid(key, "tolerance must be finite and nonnegative"));
            }
            tolerances.insert(id.to_string(), tol);
            continue;
        }
        if Scenario::ALL.iter().any(|s| s.keys().contains(&key.as_str())) {
            return Err(ConfigError::NotApplicable { key: key.clone(), scenario });
        }
        return Err(ConfigError::UnknownKey(key.clone()));
    }

    let setup = build_setup(scenario, &keys)?;
    let (default_t, default_n) = default_grid(&setup);
    let t_max = keys.num_or("t_max", default_t)?;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(invalid("t_max", "must be positive and finite"));
    }
    let n_steps = match keys.int("n_steps")? {
        None => default_n,
        Some(n) if n >= 2 => n as usize,
        Some(_) => return Err(invalid("n_steps", "must be at least 2")),
    };
    let output_dir = PathBuf::from(keys.string("output_dir")?.unwrap_or_else(|| "out".into()));
    Ok(RunConfig { scenario, setup, t_max, n_steps, output_dir, tolerances })
}

fn two_qubit(keys: &Keys, base: TwoQubitParams) -> ConfigResult<TwoQubitParams> {
    let coupling = match base.coupling {
        Coupling::Exchange { g } => Coupling::Exchange { g: keys.num_or("g", g)? },
        Coupling::Xy { gx, gy } => Coupling::Xy { gx: keys.num_or("gx", gx)?, gy: keys.num_or("gy", gy)? },
        Coupling::Swap { g } => Coupling::Swap { g },
    };
    let p = TwoQubitParams {
        omega_a: keys.num_or("omega_a", base.omega_a)?,
        omega_b: keys.num_or("omega_b", base.omega_b)?,
        beta_a0: keys.num_or("beta_a", base.beta_a0)?,
        beta_b0: keys.num_or("beta_b", base.beta_b0)?,
        coupling,
        phi: keys.num_or("phi", base.phi)?,
    };
    validate_two_qubit(&p)?;
    Ok(p)
}

fn validate_two_qubit(p: &TwoQubitParams) -> ConfigResult<()> {
    for (key, v) in [("omega_a", p.omega_a), ("omega_b", p.omega_b)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(invalid(key, "frequency must be positive"));
        }
    }
    for (key, v) in [("beta_a", p.beta_a0), ("beta_b", p.beta_b0)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(invalid(key, "inverse temperature must be finite and nonnegative"));
        }
    }
    if p.beta_a0 < p.beta_b0 {
        return Err(invalid("beta_a", format!("beta_a = {} must not be below beta_b = {}", p.beta_a0, p.beta_b0)));
    }
    if !p.phi.is_finite() {
        return Err(invalid("phi", "must be finite"));
    }
    Ok(())
}

fn sweep_values(start: f64, stop: f64, step: f64) -> ConfigResult<Vec<f64>> {
    if !(step > 0.0) {
        return Err(invalid("gx_step", "must be positive"));
    }
    if !(stop >= start) {
        return Err(invalid("gx_stop", "must not be below gx_start"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if n > 1000 {
        return Err(invalid("gx_step", "sweep would exceed 1000 runs"));
    }
    Ok((0..n).map(|k| start + k as f64 * step).collect())
}

fn build_setup(scenario: Scenario, keys: &Keys) -> ConfigResult<ScenarioSetup> {
    Ok(match scenario {
        Scenario::Fig2 => ScenarioSetup::Refrigerator(two_qubit(keys, TwoQubitParams::fig2())?),
        Scenario::Fig3 => ScenarioSetup::Engine(two_qubit(keys, TwoQubitParams::fig3())?),
        Scenario::Fig4 => {
            let base = two_qubit(keys, TwoQubitParams::fig3())?;
            let gx = sweep_values(keys.num_or("gx_start", 2.0)?, keys.num_or("gx_stop", 3.0)?, keys.num_or("gx_step", 0.1)?)?;
            ScenarioSetup::Sweep { base, gx }
        }
        Scenario::Fig5 => ScenarioSetup::Refined { refrigerator: TwoQubitParams::fig2(), engine: TwoQubitParams::fig3() },
        Scenario::AppB => {
            let d = QutritSwapParams::default_counterexample();
            let levels = [
                keys.num_or("omega_0", d.levels[0])?,
                keys.num_or("omega_1", d.levels[1])?,
                keys.num_or("omega_2", d.levels[2])?,
            ];
            if !(levels[0] < levels[1] && levels[1] < levels[2]) {
                return Err(invalid("omega_1", "levels must satisfy omega_0 < omega_1 < omega_2"));
            }
            let p = QutritSwapParams {
                levels,
                beta_1: keys.num_or("beta_1", d.beta_1)?,
                beta_2: keys.num_or("beta_2", d.beta_2)?,
                beta_a: keys.num("beta_a")?,
                g: keys.num_or("g", d.g)?,
            };
            if !(p.g > 0.0) {
                return Err(invalid("g", "must be positive"));
            }
            if !(p.beta_1 > 0.0 && p.beta_2 > 0.0) {
                return Err(invalid("beta_1", "beta_1 and beta_2 must be positive"));
            }
            if p.beta_1 == p.beta_2 {
                return Err(invalid("beta_2", "must differ from beta_1 (otherwise B is thermal)"));
            }
            ScenarioSetup::Counterexample(p)
        }
        Scenario::AppH => {
            let engine = two_qubit(keys, TwoQubitParams::fig3())?;
            let base = PassiveQuditSpec::engine_default();
            let d = match keys.int("d")? {
                None => base.d,
                Some(d) if d >= 1 => d as usize,
                Some(_) => return Err(invalid("d", "must be at least 1")),
            };
            let omega_2 = keys.num_or("omega_2", base.omega_2)?;
            if !(omega_2 > engine.omega_b) {
                return Err(invalid("omega_2", "must exceed omega_b"));
            }
            let spec = PassiveQuditSpec { d, omega_b: engine.omega_b, omega_2, beta_b0: engine.beta_b0, beta_target: engine.beta_a0 };
            ScenarioSetup::PassiveQudit { spec, engine }
        }
        Scenario::AppI => {
            let engine = two_qubit(keys, TwoQubitParams::fig3())?;
            let on = keys.num_or("gate_on", 1.0)?;
            let off = keys.num_or("gate_off", 7.0)?;
            let ramp = keys.num_or("ramp", 0.002)?;
            let speed = keys.num_or("speed", 1.0)?;
            if !(speed > 0.0) {
                return Err(invalid("speed", "must be positive"));
            }
            if !(on > 0.0) {
                return Err(invalid("gate_on", "must be positive so the coupling starts off"));
            }
            let shape = match keys.string("gate")?.as_deref().unwrap_or("trapezoid") {
                "trapezoid" => GateShape::Trapezoid { on, off, ramp },
                "smooth" => GateShape::SmoothTrapezoid { on, off, ramp },
                other => return Err(invalid("gate", format!("expected `trapezoid` or `smooth`, got `{other}`"))),
            };
            let schedule = GateSchedule::new(shape, 0.0, speed).map_err(|e| invalid("ramp", e.to_string()))?;
            ScenarioSetup::Clock { engine, schedule }
        }
        Scenario::Custom => {
            let mut missing: Vec<String> = ["omega_a", "omega_b", "beta_a", "beta_b", "machine"]
                .iter()
                .filter(|k| !keys.map.contains_key(**k))
                .map(|k| k.to_string())
                .collect();
            let has = |k: &str| keys.map.contains_key(k);
            let coupling = if has("g") {
                if has("gx") || has("gy") {
                    return Err(invalid("g", "give either g or gx and gy, not both"));
                }
                Some(Coupling::Exchange { g: 0.0 })
            } else if has("gx") || has("gy") {
                for k in ["gx", "gy"] {
                    if !has(k) {
                        missing.push(k.into());
                    }
                }
                Some(Coupling::Xy { gx: 0.0, gy: 0.0 })
            } else {
                missing.push("g (or gx and gy)".into());
                None
            };
            if !missing.is_empty() {
                return Err(ConfigError::MissingKeys(missing));
            }
            let base = TwoQubitParams { coupling: coupling.expect("checked"), phi: 0.0, ..TwoQubitParams::fig2() };
            let p = two_qubit(keys, base)?;
            match keys.string("machine")?.as_deref() {
                Some("refrigerator") => ScenarioSetup::Refrigerator(p),
                Some("engine") => ScenarioSetup::Engine(p),
                Some(other) => return Err(invalid("machine", format!("expected `refrigerator` or `engine`, got `{other}`"))),
                None => unreachable!("checked above"),
            }
        }
    })
}

fn default_grid(setup: &ScenarioSetup) -> (f64, usize) {
    match setup {
        ScenarioSetup::Refrigerator(p) | ScenarioSetup::Engine(p) => (p.default_t_max(), DEFAULT_STEPS),
        ScenarioSetup::Sweep { base, gx } => {
            let t = gx
                .iter()
                .map(|&g| TwoQubitParams { coupling: Coupling::Xy { gx: g, gy: gy_of(base) }, ..*base }.default_t_max())
                .fold(0.0, f64::max);
            (t, DEFAULT_STEPS)
        }
        ScenarioSetup::Refined { refrigerator, engine } => {
            (refrigerator.default_t_max().max(engine.default_t_max()), DEFAULT_STEPS)
        }
        ScenarioSetup::Counterexample(p) => (2.0 * p.swap_time(), DEFAULT_STEPS),
        ScenarioSetup::PassiveQudit { engine, .. } => (engine.default_t_max(), DEFAULT_STEPS),
        ScenarioSetup::Clock { .. } => (8.0, CLOCK_STEPS),
    }
}

fn gy_of(p: &TwoQubitParams) -> f64 {
    match p.coupling {
        Coupling::Xy { gy, .. } => gy,
        _ => 0.0,
    }
}

/// Caption defaults of a scenario as `(key, value)` pairs, for `list`.
pub fn scenario_defaults(scenario: Scenario) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut table = toml::Table::new();
    table.insert("scenario".into(), Value::String(scenario.name().into()));
    if scenario == Scenario::Custom {
        return vec![("required".into(), "omega_a, omega_b, beta_a, beta_b, machine, g | gx + gy".into())];
    }
    let cfg = config_from_table(table).expect("shipped defaults are valid");
    let mut push_tq = |prefix: &str, p: &TwoQubitParams| {
        out.push((format!("{prefix}omega_a"), p.omega_a.to_string()));
        out.push((format!("{prefix}omega_b"), p.omega_b.to_string()));
        out.push((format!("{prefix}beta_a"), p.beta_a0.to_string()));
        out.push((format!("{prefix}beta_b"), p.beta_b0.to_string()));
        match p.coupling {
            Coupling::Exchange { g } | Coupling::Swap { g } => out.push((format!("{prefix}g"), g.to_string())),
            Coupling::Xy { gx, gy } => {
                out.push((format!("{prefix}gx"), gx.to_string()));
                out.push((format!("{prefix}gy"), gy.to_string()));
            }
        }
        out.push((format!("{prefix}phi"), format!("{:.6}", p.phi)));
    };
    match &cfg.setup {
        ScenarioSetup::Refrigerator(p) | ScenarioSetup::Engine(p) => push_tq("", p),
        ScenarioSetup::Sweep { base, gx } => {
            push_tq("", base);
            out.push(("gx_start".into(), gx[0].to_string()));
            out.push(("gx_stop".into(), gx[gx.len() - 1].to_string()));
            out.push(("gx_step".into(), "0.1".into()));
        }
        ScenarioSetup::Refined { refrigerator, engine } => {
            push_tq("refrigerator.", refrigerator);
            push_tq("engine.", engine);
        }
        ScenarioSetup::Counterexample(p) => {
            for (k, w) in p.levels.iter().enumerate() {
                out.push((format!("omega_{k}"), w.to_string()));
            }
            out.push(("beta_1".into(), p.beta_1.to_string()));
            out.push(("beta_2".into(), p.beta_2.to_string()));
            out.push(("beta_a".into(), "effective temperature of B".into()));
            out.push(("g".into(), p.g.to_string()));
        }
        ScenarioSetup::PassiveQudit { spec, engine } => {
            push_tq("", engine);
            out.push(("d".into(), spec.d.to_string()));
            out.push(("omega_2".into(), spec.omega_2.to_string()));
        }
        ScenarioSetup::Clock { engine, schedule } => {
            push_tq("", engine);
            if let GateShape::Trapezoid { on, off, ramp } = schedule.shape {
                out.push(("gate".into(), "trapezoid".into()));
                out.push(("gate_on".into(), on.to_string()));
                out.push(("gate_off".into(), off.to_string()));
                out.push(("ramp".into(), ramp.to_string()));
            }
            out.push(("speed".into(), schedule.v.to_string()));
        }
    }
    out.push(("t_max".into(), format!("{:.6}", cfg.t_max)));
    out.push(("n_steps".into(), cfg.n_steps.to_string()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_defaults() {
        let cfg = parse_config("scenario = \"fig2\"").unwrap();
        let ScenarioSetup::Refrigerator(p) = cfg.setup else { panic!("wrong setup") };
        assert_eq!(p, TwoQubitParams::fig2());
        assert_eq!(cfg.n_steps, DEFAULT_STEPS);
        assert!((cfg.t_max - p.default_t_max()).abs() < 1e-15);
    }

    #[test]
    fn fig3_defaults() {
        let cfg = parse_config("scenario = \"fig3\"\n# comment\n").unwrap();
        assert_eq!(cfg.setup, ScenarioSetup::Engine(TwoQubitParams::fig3()));
    }

    #[test]
    fn overrides_and_tolerances() {
        let cfg = parse_config("scenario = \"fig2\"\ng = 0.7\nn_steps = 50\ntol_carnot = 1e-6").unwrap();
        let ScenarioSetup::Refrigerator(p) = cfg.setup else { panic!("wrong setup") };
        assert_eq!(p.coupling, Coupling::Exchange { g: 0.7 });
        assert_eq!(cfg.n_steps, 50);
        assert_eq!(cfg.tolerances.get("carnot"), Some(&1e-6));
    }

    #[test]
    fn errors_name_the_key() {
        let e = parse_config("scenario = \"fig2\"\nbogus = 1").unwrap_err();
        assert_eq!(e, ConfigError::UnknownKey("bogus".into()));
        let e = parse_config("scenario = \"fig2\"\ngx = 1").unwrap_err();
        assert!(matches!(e, ConfigError::NotApplicable { ref key, .. } if key == "gx"));
        let e = parse_config("scenario = \"fig2\"\ng = \"big\"").unwrap_err();
        assert!(matches!(e, ConfigError::TypeMismatch { ref key, .. } if key == "g"));
        let e = parse_config("scenario = \"fig2\"\nn_steps = 1").unwrap_err();
        assert!(e.to_string().contains("n_steps"));
        let e = parse_config("scenario = \"fig2\"\ntol_nonsense = 1").unwrap_err();
        assert_eq!(e, ConfigError::UnknownKey("tol_nonsense".into()));
    }

    #[test]
    fn custom_requires_hamiltonian() {
        let e = parse_config("scenario = \"custom\"").unwrap_err();
        let msg = e.to_string();
        for k in ["omega_a", "omega_b", "beta_a", "beta_b", "machine", "g (or gx and gy)"] {
            assert!(msg.contains(k), "{msg}");
        }
        let cfg = parse_config(
            "scenario = \"custom\"\nmachine = \"engine\"\nomega_a = 1\nomega_b = 2\nbeta_a = 3\nbeta_b = 0.5\ngx = 1\ngy = 0.5",
        )
        .unwrap();
        assert!(matches!(cfg.setup, ScenarioSetup::Engine(_)));
    }

    #[test]
    fn sweep_grid() {
        let cfg = parse_config("scenario = \"fig4\"").unwrap();
        let ScenarioSetup::Sweep { gx, .. } = cfg.setup else { panic!("wrong setup") };
        assert_eq!(gx.len(), 11);
        assert!((gx[10] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn every_scenario_lists_defaults() {
        for s in Scenario::ALL {
            assert!(!scenario_defaults(s).is_empty());
        }
    }
}
