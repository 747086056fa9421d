use num_complex::Complex64;

use super::report::{ClockSummary, MachineReport};
use crate::dynamics::{classify_source, ledger, simulate_gated, CompositeSystem, GateSchedule, SourceKind, SourceSeries, TimeGrid, SOURCE_TOL};
use crate::error::{Error, Result};
use crate::quantum::{max_abs, propagator, Operator, SpectralPropagator};

/// Tolerance of the clock-work identities, in units of the spectral spread of the first subsystem.
pub const CLOCK_TOL: f64 = 1e-6;

fn energy_unit(system: &CompositeSystem) -> Result<f64> {
    let e = system.local_hamiltonians()[0].spectrum()?;
    let spread = e[e.len() - 1] - e[0];
    Ok(if spread > 0.0 { spread } else { 1.0 })
}

fn nearest(times: &[f64], t: f64) -> usize {
    times
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
        .map(|(k, _)| k)
        .unwrap_or(0)
}

/// Machine whose coupling is switched on and off by a clock, `H(t) = sum_i H_i + G(q0 + v t) V`.
/// The clock supplies `W_C`; after a full passage `W_C` equals the total local energy change.
pub fn clock_machine(system: &CompositeSystem, schedule: &GateSchedule, grid: &TimeGrid) -> Result<MachineReport> {
    let (start, end) = (schedule.at(grid.times()[0]), schedule.at(grid.end()));
    if start != 0.0 || end != 0.0 {
        return Err(Error::GateEndpoint { start, end });
    }
    let unit = energy_unit(system)?;
    let tol = CLOCK_TOL * unit;
    let traj = simulate_gated(system, schedule, grid)?;
    let rows = ledger(&traj)?;
    let mut params: Vec<(String, f64)> = vec![("q0".into(), schedule.q0), ("v".into(), schedule.v)];
    if let Some(tau) = schedule.ramp_time() {
        params.push(("ramp_time".into(), tau));
    }
    let mut report = MachineReport::new("clock", params, unit, traj, rows);
    report.assert_second_laws(tol);
    report.assert_two_body_laws()?;

    let w_c = report.w_c().expect("gated trajectory carries W_C").to_vec();
    let times = report.times();
    let last = report.rows.last().expect("non-empty ledger");
    let local_change: f64 = last.subsystems.iter().map(|s| s.energy).sum::<f64>()
        - report.rows[0].subsystems.iter().map(|s| s.energy).sum::<f64>();
    let w_c_end = w_c[w_c.len() - 1];
    report.assert_identity(
        "clock_work",
        "W_C(t_end) = sum_i Delta E_i after a full passage",
        [(grid.end(), w_c_end - local_change)],
        tol,
    );

    let h0 = system.free_hamiltonian()?;
    let v = system.coupling();
    let mut switching_estimate = None;
    let mut flat_top_deviation = None;
    if let (Some((t1, t2)), Some(tau)) = (schedule.plateau_times(), schedule.ramp_time()) {
        if t1 < t2 && t2 + tau <= grid.end() {
            let (k1, k2) = (nearest(&times, t1), nearest(&times, t2));
            let v_on = report.rows[k1].e_int;
            let v_off = report.rows[k2].e_int;
            let estimate = v_on - v_off;
            // <V> drifts at most ||[H0, V]|| per unit time during each ramp.
            let comm = Operator::new((h0.matrix() * v.matrix() - v.matrix() * h0.matrix()) * Complex64::i())?;
            let drift = comm.spectral_norm()?;
            let slack = drift * (2.0 * tau + (times[k1] - t1).abs() + (times[k2] - t2).abs()) + tol;
            report.assert_identity(
                "switching",
                "W_C = <V(t1)> - <V(t2)> for a flat-top gate (up to ramp drift)",
                [(grid.end(), w_c_end - estimate)],
                slack,
            );
            switching_estimate = Some(estimate);

            // Static-coupling reference started from the freely evolved state at mid-ramp.
            let t_c = t1 - 0.5 * tau;
            let free = propagator(&h0, t_c)?;
            let rho_pre = system.initial_state().conjugate_by(free.matrix());
            let full = SpectralPropagator::new(&system.total_hamiltonian()?)?;
            let mut worst = 0.0f64;
            for (k, &t) in times.iter().enumerate() {
                if t < t1 || t > t2 {
                    continue;
                }
                let reference = rho_pre.conjugate_by(full.at(t - t_c).matrix());
                let diff = report.trajectory.states()[k].matrix() - reference.matrix();
                worst = worst.max(max_abs(&diff));
            }
            report.diagnostic(
                "flat_top",
                "joint state on the plateau matches static coupling from mid-ramp",
                worst,
                worst <= tol,
            );
            flat_top_deviation = Some(worst);
        }
    }

    // The clock in the effective picture: never correlated, no entropy change, work only.
    let n = times.len();
    let series = SourceSeries {
        correlation: vec![0.0; n],
        entropy_change: vec![0.0; n],
        heat: vec![0.0; n],
        work: w_c.clone(),
        distance_from_thermal: Vec::new(),
    };
    let probe = classify_source("clock", &series, SOURCE_TOL);
    report.diagnostic(
        "clock_ideal_work",
        "clock acts as an ideal work source",
        probe.max_abs_heat,
        probe.kind == SourceKind::IdealWork && probe.consistent,
    );
    report.clock = Some(ClockSummary { w_c_end, local_energy_change: local_change, switching_estimate, flat_top_deviation });
    Ok(report)
}
