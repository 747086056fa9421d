use rayon::prelude::*;

use super::report::{FigureOfMerit, MachineReport, BOUND_TOL, FOM_GATE};
use crate::dynamics::{ledger, simulate, TimeGrid};
use crate::error::{Error, Result};
use crate::models::{Coupling, TwoQubitParams};
use crate::thermo::beta_times;

/// Allowed excursion of a path-averaged temperature outside its endpoint range.
pub const AVERAGE_BETA_TOL: f64 = 1e-6;
/// Thermal-energy changes below this (units of `omega_A`) leave the refined bound undefined.
pub const REFINED_GATE: f64 = 1e-8;

pub(crate) fn two_qubit_params(p: &TwoQubitParams) -> Vec<(String, f64)> {
    let mut out = vec![
        ("omega_a".to_string(), p.omega_a),
        ("omega_b".to_string(), p.omega_b),
        ("beta_a".to_string(), p.beta_a0),
        ("beta_b".to_string(), p.beta_b0),
    ];
    match p.coupling {
        Coupling::Exchange { g } | Coupling::Swap { g } => out.push(("g".to_string(), g)),
        Coupling::Xy { gx, gy } => {
            out.push(("gx".to_string(), gx));
            out.push(("gy".to_string(), gy));
        }
    }
    out.push(("phi".to_string(), p.phi));
    out
}

fn two_qubit_report(scenario: &str, p: &TwoQubitParams, grid: &TimeGrid) -> Result<MachineReport> {
    if p.beta_a0 < p.beta_b0 {
        return Err(Error::TemperatureOrdering { beta_a: p.beta_a0, beta_b: p.beta_b0 });
    }
    let traj = simulate(&p.system()?, grid)?;
    let rows = ledger(&traj)?;
    let mut report = MachineReport::new(scenario, two_qubit_params(p), p.omega(), traj, rows);
    report.assert_second_laws(BOUND_TOL);
    report.assert_two_body_laws()?;
    Ok(report)
}

/// `W_A + W_B - Delta E_int`, the resource consumed by a two-body machine.
pub(crate) fn resource(row: &crate::dynamics::LedgerRow) -> f64 {
    row.subsystems.iter().map(|s| s.work).sum::<f64>() - row.delta_e_int
}

/// Two-qubit refrigerator cooling `A`: coefficient of performance, Carnot chain and,
/// for equal initial temperatures, the single-temperature constraint.
pub fn run_refrigerator(params: &TwoQubitParams, grid: &TimeGrid) -> Result<MachineReport> {
    let mut report = two_qubit_report("refrigerator", params, grid)?;
    let (ba, bb) = (params.beta_a0, params.beta_b0);
    let gate = FOM_GATE * params.omega_a;
    report.fom_kind = Some(FigureOfMerit::Cop);
    report.fom = report
        .rows
        .iter()
        .map(|r| {
            let d = resource(r);
            (d > gate).then(|| r.subsystems[0].heat / d)
        })
        .collect();
    let rows = report.rows.clone();
    if ba > bb {
        let carnot = bb / (ba - bb);
        report.carnot = Some(carnot);
        let fom: Vec<(f64, f64)> =
            rows.iter().zip(&report.fom).filter_map(|(r, f)| f.map(|f| (r.t, f - carnot))).collect();
        report.assert_excess("carnot", "COP <= beta_B(0) / (beta_A(0) - beta_B(0))", fom, BOUND_TOL);
        let chain: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.subsystems[0].heat >= 0.0)
            .map(|r| (r.t, beta_times(ba - bb, r.subsystems[0].heat) - beta_times(bb, resource(r))))
            .collect();
        report.assert_excess(
            "cop_chain",
            "(beta_A(0) - beta_B(0)) Q_A <= beta_B(0) (W_A + W_B - Delta E_int) where Q_A >= 0",
            chain,
            BOUND_TOL,
        );
    } else {
        report.assert_excess(
            "single_temperature",
            "W_A + W_B - Delta E_int >= 0 at equal initial temperatures",
            rows.iter().map(|r| (r.t, -resource(r))),
            BOUND_TOL,
        );
    }
    let period = 2.0 * std::f64::consts::PI / report.omega;
    let window_min = rows
        .iter()
        .filter(|r| r.t > 0.0 && r.t < period)
        .map(|r| r.subsystems[0].heat)
        .fold(f64::INFINITY, f64::min);
    let window_min = if window_min.is_finite() { window_min } else { 0.0 };
    report.diagnostic(
        "refrigeration_window",
        "Q_A >= 0 on (0, 2 pi / Omega)",
        -window_min,
        window_min >= -BOUND_TOL,
    );
    Ok(report)
}

/// Two-qubit engine driven by the temperature gradient between `A` and `B`.
pub fn run_engine(params: &TwoQubitParams, grid: &TimeGrid) -> Result<MachineReport> {
    let mut report = two_qubit_report("engine", params, grid)?;
    let (ba, bb) = (params.beta_a0, params.beta_b0);
    let gate = FOM_GATE * params.omega_a;
    report.fom_kind = Some(FigureOfMerit::Efficiency);
    report.fom = report
        .rows
        .iter()
        .map(|r| {
            let q_b = r.subsystems[1].heat;
            let num = -resource(r);
            (q_b.abs() > gate).then(|| if num > 0.0 { num / q_b } else { 0.0 })
        })
        .collect();
    let rows = report.rows.clone();
    if ba > 0.0 {
        let carnot = 1.0 - bb / ba;
        report.carnot = Some(carnot);
        let fom: Vec<(f64, f64)> =
            rows.iter().zip(&report.fom).filter_map(|(r, f)| f.map(|f| (r.t, f - carnot))).collect();
        report.assert_excess("carnot", "eta <= 1 - beta_B(0) / beta_A(0)", fom, BOUND_TOL);
    }
    let max_wb = rows.iter().fold(0.0f64, |m, r| m.max(r.subsystems[1].work.abs()));
    report.diagnostic("w_b_zero", "W_B = 0 (B acts as a pure heat source)", max_wb, max_wb <= BOUND_TOL);
    Ok(report)
}

/// Engines with the `x` coupling replaced by each entry of `gx`, run in parallel.
pub fn sweep_coupling(base: &TwoQubitParams, gx: &[f64], grid: &TimeGrid) -> Result<Vec<MachineReport>> {
    let gy = match base.coupling {
        Coupling::Xy { gy, .. } => gy,
        _ => return Err(Error::InvalidArgument("coupling sweep needs an xy coupling".into())),
    };
    if gx.is_empty() {
        return Err(Error::InvalidArgument("coupling sweep needs at least one value".into()));
    }
    gx.par_iter()
        .map(|&g| run_engine(&TwoQubitParams { coupling: Coupling::Xy { gx: g, gy }, ..*base }, grid))
        .collect()
}

/// Time and value of the first local maximum of the figure of merit.
pub fn first_peak(report: &MachineReport) -> Option<(f64, f64)> {
    let f = &report.fom;
    (1..f.len().saturating_sub(1)).find_map(|k| match (f[k - 1], f[k], f[k + 1]) {
        (Some(a), Some(b), Some(c)) if b > 0.0 && b >= a && b > c => Some((report.rows[k].t, b)),
        _ => None,
    })
}

/// Path-averaged inverse temperature of subsystem `j` up to every sample, with
/// `int beta dE_th` from the trapezoidal rule on the report grid; `None` where
/// `Delta E_th` is degenerate.
pub fn average_betas(report: &MachineReport, j: usize) -> Vec<Option<f64>> {
    let gate = FOM_GATE * report.param("omega_a").unwrap_or(1.0);
    let rows = &report.rows;
    let mut integral = 0.0;
    let mut out = Vec::with_capacity(rows.len());
    for k in 0..rows.len() {
        if k > 0 {
            let (prev, now) = (&rows[k - 1].subsystems[j], &rows[k].subsystems[j]);
            integral += beta_times(0.5 * (prev.beta.value() + now.beta.value()), now.thermal_energy - prev.thermal_energy);
        }
        let delta = rows[k].subsystems[j].thermal_energy - rows[0].subsystems[j].thermal_energy;
        out.push((delta.abs() > gate).then(|| integral / delta));
    }
    out
}

/// Path-averaged inverse temperature evaluated in closed form: along the entropy-matched
/// Gibbs family `dS = beta dE_th`, so `int beta dE_th = Delta S` for any sampled path.
/// `None` where `|Delta E_th|` is below `REFINED_GATE`.
pub fn average_betas_exact(report: &MachineReport, j: usize) -> Vec<Option<f64>> {
    let gate = REFINED_GATE * report.param("omega_a").unwrap_or(1.0);
    let first = &report.rows[0].subsystems[j];
    report
        .rows
        .iter()
        .map(|r| {
            let s = &r.subsystems[j];
            let delta = s.thermal_energy - first.thermal_energy;
            (delta.abs() > gate).then(|| (s.entropy - first.entropy) / delta)
        })
        .collect()
}

/// Adds the refined Carnot bound built from path-averaged temperatures (closed-form
/// route, see [`average_betas_exact`]) and checks `fom <= refined` wherever both are
/// defined and `refined <= carnot` while the machine operates in its direction.
pub fn refined_bounds(mut report: MachineReport) -> Result<MachineReport> {
    let kind = report
        .fom_kind
        .ok_or_else(|| Error::InvalidArgument("refined bounds need a machine report with a figure of merit".into()))?;
    let bar_a = average_betas_exact(&report, 0);
    let bar_b = average_betas_exact(&report, 1);
    report.refined = bar_a
        .iter()
        .zip(&bar_b)
        .map(|(a, b)| match (*a, *b) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => match kind {
                FigureOfMerit::Cop => (a > b).then(|| b / (a - b)),
                FigureOfMerit::Efficiency => (a > 0.0).then(|| 1.0 - b / a),
            },
            _ => None,
        })
        .collect();
    let rows = report.rows.clone();
    let lower: Vec<(f64, f64)> = rows
        .iter()
        .zip(report.fom.iter().zip(&report.refined))
        .filter_map(|(r, (f, b))| Some((r.t, f.as_ref()? - b.as_ref()?)))
        .collect();
    report.assert_excess("refined_lower", "figure of merit <= refined Carnot bound", lower, BOUND_TOL);
    if let Some(carnot) = report.carnot {
        // Ordering against Carnot holds while heat flows in the machine's direction:
        // out of A for the refrigerator, out of B for the engine.
        let operating = |r: &crate::dynamics::LedgerRow| {
            let (q_a, q_b) = (r.subsystems[0].heat, r.subsystems[1].heat);
            match kind {
                FigureOfMerit::Cop => q_a >= 0.0 && q_b <= 0.0,
                FigureOfMerit::Efficiency => q_b >= 0.0 && q_a <= 0.0,
            }
        };
        let upper: Vec<(f64, f64)> = rows
            .iter()
            .zip(&report.refined)
            .filter(|(r, _)| operating(r))
            .filter_map(|(r, b)| Some((r.t, b.as_ref()? - carnot)))
            .collect();
        report.assert_excess(
            "refined_upper",
            "refined Carnot bound <= Carnot bound while operating as a machine",
            upper,
            BOUND_TOL,
        );
    }
    let mut range = Vec::new();
    for (j, bars) in [(0usize, &bar_a), (1, &bar_b)] {
        let b0 = rows[0].subsystems[j].beta.value();
        for (r, bar) in rows.iter().zip(bars.iter()) {
            if let Some(bar) = bar {
                let bt = r.subsystems[j].beta.value();
                let excess = (b0.min(bt) - bar).max(bar - b0.max(bt));
                range.push((r.t, excess));
            }
        }
    }
    report.assert_excess(
        "average_beta_range",
        "min[beta_j(0), beta_j(t)] <= path-averaged beta_j <= max[beta_j(0), beta_j(t)]",
        range,
        AVERAGE_BETA_TOL,
    );
    Ok(report)
}
