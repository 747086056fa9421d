use std::f64::consts::FRAC_PI_2;

use super::report::{MachineReport, SwapSummary, BOUND_TOL};
use crate::dynamics::{ledger, simulate, CompositeSystem, TimeGrid};
use crate::error::{Error, Result};
use crate::models::{make_coupling, passive_state, Coupling};
use crate::quantum::{DensityMatrix, Operator, SubsystemLayout};
use crate::thermo::{sigma_erg, state_beta, thermal_snapshot, thermal_state};

/// `sigma_erg` at the swap time must be below this for the counterexample to count.
pub const SWAP_NEGATIVITY: f64 = 1e-6;
/// Agreement required between `sigma_erg` and `sigma_A` when `B` is a qubit.
pub const QUBIT_ERG_TOL: f64 = 1e-10;

/// Two identical qutrits coupled by a swap, `B` in a passive state with
/// `p_k ~ exp(-beta_k (omega_k - omega_0)) p_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QutritSwapParams {
    pub levels: [f64; 3],
    pub beta_1: f64,
    pub beta_2: f64,
    /// Initial temperature of `A`; `None` uses the effective temperature of `B`.
    pub beta_a: Option<f64>,
    pub g: f64,
}

impl QutritSwapParams {
    pub fn default_counterexample() -> Self {
        QutritSwapParams { levels: [0.0, 1.0, 2.0], beta_1: 0.5, beta_2: 2.0, beta_a: None, g: 1.0 }
    }

    /// `g t = pi / 2`.
    pub fn swap_time(&self) -> f64 {
        FRAC_PI_2 / self.g
    }
}

/// Two identical systems with Hamiltonian `diag(levels)` coupled by `g sum_{k != l} |kl><lk|`,
/// `A` thermal at `beta_a` (default: the effective temperature of `rho_b`).
/// Reports `sigma_erg` next to the ledger and evaluates both productions at `g t = pi / 2`.
pub fn swap_machine(
    levels: &[f64],
    rho_b: &DensityMatrix,
    beta_a: Option<f64>,
    g: f64,
    grid: &TimeGrid,
) -> Result<MachineReport> {
    if !(g > 0.0) {
        return Err(Error::InvalidArgument(format!("swap coupling must be positive, got {g}")));
    }
    let d = levels.len();
    let h = Operator::diagonal(levels);
    if rho_b.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: rho_b.dim() });
    }
    let beta_b0 = state_beta(&h, rho_b)?.value();
    let beta_a = beta_a.unwrap_or(beta_b0);
    let layout = SubsystemLayout::pair(d, d);
    let v = make_coupling(Coupling::Swap { g }, &layout)?;
    let rho_a = thermal_state(&h, beta_a)?;
    let system = CompositeSystem::new(layout, vec![h.clone(), h.clone()], v, vec![rho_a, rho_b.clone()])?;

    let traj = simulate(&system, grid)?;
    let rows = ledger(&traj)?;
    let mut params: Vec<(String, f64)> =
        levels.iter().enumerate().map(|(k, w)| (format!("omega_{k}"), *w)).collect();
    params.push(("beta_a".into(), beta_a));
    params.push(("beta_b".into(), beta_b0));
    params.push(("g".into(), g));
    let mut report = MachineReport::new("swap", params, g, traj, rows);
    report.assert_second_laws(BOUND_TOL);
    report.assert_two_body_laws()?;

    let snaps = report.trajectory.snapshots();
    let erg: Vec<f64> = snaps.iter().map(|s| sigma_erg(&snaps[0][0], &s[0], &snaps[0][1], &s[1])).collect();
    if d == 2 {
        let samples: Vec<(f64, f64)> =
            report.rows.iter().zip(&erg).map(|(r, e)| (r.t, e - r.subsystems[0].sigma)).collect();
        report.assert_identity("qubit_erg_equals_sigma", "sigma_erg = sigma_A for a qubit B", samples, QUBIT_ERG_TOL);
    }
    report.sigma_erg = Some(erg);

    let t_swap = FRAC_PI_2 / g;
    let at_swap = simulate(&system, &TimeGrid::new(vec![0.0, t_swap])?)?;
    let swap_rows = ledger(&at_swap)?;
    let s = at_swap.snapshots();
    let b0 = thermal_snapshot(&system.local_hamiltonians()[1], rho_b, "B")?;
    report.swap = Some(SwapSummary {
        t_swap,
        sigma_a: swap_rows[1].subsystems[0].sigma,
        sigma_erg: sigma_erg(&s[0][0], &s[1][0], &s[0][1], &s[1][1]),
        expected_sigma_erg: beta_b0 * (b0.thermal_energy - b0.energy),
    });
    Ok(report)
}

/// Qutrit swap with a passive, non-thermal `B`: `sigma_A` stays nonnegative while the
/// ergotropy-based production turns negative at the swap time.
pub fn counterexample_qutrit(params: &QutritSwapParams, grid: &TimeGrid) -> Result<MachineReport> {
    let [w0, w1, w2] = params.levels;
    if !(w0 < w1 && w1 < w2) {
        return Err(Error::InvalidArgument("qutrit levels must be strictly increasing".into()));
    }
    if !(params.beta_1 > 0.0 && params.beta_2 > 0.0) {
        return Err(Error::InvalidArgument("beta_1 and beta_2 must be positive".into()));
    }
    if (params.beta_1 - params.beta_2).abs() <= 1e-12 * params.beta_1.max(params.beta_2) {
        return Err(Error::InvalidArgument(
            "beta_1 = beta_2 makes B thermal; the counterexample needs beta_1 != beta_2".into(),
        ));
    }
    let rho_b = passive_state(&params.levels, &[0.0, params.beta_1, params.beta_2])?;
    let mut report = swap_machine(&params.levels, &rho_b, params.beta_a, params.g, grid)?;
    report.scenario = "qutrit_counterexample".into();
    report.params.push(("beta_1".into(), params.beta_1));
    report.params.push(("beta_2".into(), params.beta_2));
    let swap = report.swap.expect("swap summary");
    if params.beta_a.is_none() {
        report.assert_identity(
            "swap_sigma_a",
            "sigma_A = 0 at the swap time",
            [(swap.t_swap, swap.sigma_a)],
            BOUND_TOL,
        );
        report.assert_identity(
            "swap_sigma_erg",
            "sigma_erg = beta_B(0) (E_th_B(0) - E_B(0)) at the swap time",
            [(swap.t_swap, swap.sigma_erg - swap.expected_sigma_erg)],
            BOUND_TOL,
        );
    }
    report.diagnostic(
        "sigma_erg_negative",
        "sigma_erg < 0 at the swap time (expected: ergotropy underestimates work)",
        swap.sigma_erg,
        swap.sigma_erg < -SWAP_NEGATIVITY,
    );
    Ok(report)
}
