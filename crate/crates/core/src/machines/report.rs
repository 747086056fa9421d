use crate::dynamics::{LedgerRow, Trajectory};
use crate::error::Result;
use crate::thermo::free_energy;

/// Slack allowed on every asserted inequality and identity.
pub const BOUND_TOL: f64 = 1e-9;
/// Figures of merit are reported only where their denominator exceeds this, in units of `omega_A`.
pub const FOM_GATE: f64 = 1e-12;

/// Which figure of merit a report carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureOfMerit {
    /// `Q_A / (W_A + W_B - Delta E_int)`.
    Cop,
    /// `(-W_A - W_B + Delta E_int) / Q_B`, gated by the sign of the numerator.
    Efficiency,
}

/// Outcome of one asserted inequality or identity over a whole run.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: String,
    pub description: String,
    /// Worst residual seen: the largest excess over the bound (positive means violated
    /// beyond zero, compared against `tolerance`).
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Diagnostics are reported but never fail a run.
    pub diagnostic: bool,
}

/// One sample at which a check failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub id: String,
    pub residual: f64,
}

/// Swap-time evaluation of the qutrit counterexample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwapSummary {
    pub t_swap: f64,
    pub sigma_a: f64,
    pub sigma_erg: f64,
    /// `beta_B(0) (E_th_B(0) - E_B(0))`.
    pub expected_sigma_erg: f64,
}

/// Comparison of the qudit machine's active block with the two-qubit engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockSummary {
    pub beta_2: f64,
    /// Weight of the active block, `Tr{P rho}`, constant in time.
    pub block_weight: f64,
    pub max_work_deviation: f64,
    pub max_mixture_deviation: f64,
    pub max_commutator: f64,
}

/// Gate bookkeeping of a clock-driven run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClockSummary {
    pub w_c_end: f64,
    pub local_energy_change: f64,
    pub switching_estimate: Option<f64>,
    pub flat_top_deviation: Option<f64>,
}

/// Ledger of one scenario run together with its figures of merit and checks.
#[derive(Clone, Debug)]
pub struct MachineReport {
    pub scenario: String,
    pub params: Vec<(String, f64)>,
    /// Characteristic coupling frequency.
    pub omega: f64,
    pub trajectory: Trajectory,
    pub rows: Vec<LedgerRow>,
    pub fom_kind: Option<FigureOfMerit>,
    pub fom: Vec<Option<f64>>,
    pub carnot: Option<f64>,
    pub refined: Vec<Option<f64>>,
    pub sigma_erg: Option<Vec<f64>>,
    pub checks: Vec<Check>,
    pub violations: Vec<Violation>,
    pub swap: Option<SwapSummary>,
    pub block: Option<BlockSummary>,
    pub clock: Option<ClockSummary>,
}

impl MachineReport {
    pub(crate) fn new(scenario: &str, params: Vec<(String, f64)>, omega: f64, trajectory: Trajectory, rows: Vec<LedgerRow>) -> Self {
        let n = rows.len();
        MachineReport {
            scenario: scenario.to_string(),
            params,
            omega,
            trajectory,
            rows,
            fom_kind: None,
            fom: vec![None; n],
            carnot: None,
            refined: vec![None; n],
            sigma_erg: None,
            checks: Vec::new(),
            violations: Vec::new(),
            swap: None,
            block: None,
            clock: None,
        }
    }

    /// True when every non-diagnostic check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.diagnostic)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    /// Series of `f` applied to the row entry of subsystem `j`.
    pub fn column(&self, j: usize, f: impl Fn(&crate::dynamics::SubsystemRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(|r| f(&r.subsystems[j])).collect()
    }

    pub fn w_c(&self) -> Option<&[f64]> {
        self.trajectory.w_c()
    }

    /// Records `value <= 0` (up to `tol`) at every sample; `value` is the excess over the bound.
    pub(crate) fn assert_excess(
        &mut self,
        id: &str,
        description: &str,
        samples: impl IntoIterator<Item = (f64, f64)>,
        tol: f64,
    ) {
        let mut worst = f64::NEG_INFINITY;
        let mut passed = true;
        for (t, excess) in samples {
            if excess.is_nan() {
                continue;
            }
            worst = worst.max(excess);
            if excess > tol {
                passed = false;
                self.violations.push(Violation { t, id: id.to_string(), residual: excess });
            }
        }
        if worst == f64::NEG_INFINITY {
            worst = 0.0;
        }
        self.checks.push(Check {
            id: id.to_string(),
            description: description.to_string(),
            worst,
            tolerance: tol,
            passed,
            diagnostic: false,
        });
    }

    /// Records `|residual| <= tol` at every sample.
    pub(crate) fn assert_identity(
        &mut self,
        id: &str,
        description: &str,
        samples: impl IntoIterator<Item = (f64, f64)>,
        tol: f64,
    ) {
        self.assert_excess(id, description, samples.into_iter().map(|(t, r)| (t, r.abs())), tol);
    }

    pub(crate) fn diagnostic(&mut self, id: &str, description: &str, worst: f64, passed: bool) {
        self.checks.push(Check {
            id: id.to_string(),
            description: description.to_string(),
            worst,
            tolerance: 0.0,
            passed,
            diagnostic: true,
        });
    }

    /// Entropy-production, Clausius and identity checks shared by every scenario.
    /// `energy_tol` bounds the energy-balance residual (exact dynamics: `BOUND_TOL`).
    pub(crate) fn assert_second_laws(&mut self, energy_tol: f64) {
        let rows = self.rows.clone();
        let per_sub = |f: fn(&crate::dynamics::SubsystemRow) -> f64| {
            rows.iter().flat_map(move |r| r.subsystems.iter().map(move |s| (r.t, f(s)))).collect::<Vec<_>>()
        };
        self.assert_excess("sigma", "sigma_j >= 0 for every subsystem", per_sub(|s| -s.sigma), BOUND_TOL);
        self.assert_excess(
            "clausius",
            "-sum_j beta_j(0) Q_j >= 0",
            rows.iter().map(|r| (r.t, -r.clausius_sum)),
            BOUND_TOL,
        );
        self.assert_excess("tighter_sigma", "time-resolved sigma_j >= 0", per_sub(|s| -s.tighter_sigma), BOUND_TOL);
        self.assert_excess(
            "tighter_clausius",
            "-sum_j int beta_j dQ_j >= 0",
            rows.iter().map(|r| (r.t, -r.tighter_clausius)),
            BOUND_TOL,
        );
        self.assert_identity(
            "second_law_identity",
            "sigma_j = Delta I_tot + sum_{i != j} D(w_i[beta_i(t)] || w_i[beta_i(0)])",
            per_sub(|s| s.identity_residual),
            BOUND_TOL,
        );
        self.assert_identity(
            "thermal_identity",
            "Delta S_j + D(w_j[beta_j(t)] || w_j[beta_j(0)]) + beta_j(0) Q_j = 0",
            per_sub(|s| s.thermal_residual),
            BOUND_TOL,
        );
        self.assert_identity(
            "energy_balance",
            "sum_i Delta E_i + Delta E_int = W_C",
            rows.iter().map(|r| (r.t, r.energy_residual)),
            energy_tol,
        );
    }

    /// Two-body checks: free-energy inequality and the hierarchy against the
    /// energy-based entropy production when the partner starts thermal.
    pub(crate) fn assert_two_body_laws(&mut self) -> Result<()> {
        if self.rows[0].subsystems.len() != 2 {
            return Ok(());
        }
        let first = self.rows[0].clone();
        let rows = self.rows.clone();
        for (j, i) in [(0usize, 1usize), (1, 0)] {
            let beta_i = first.subsystems[i].beta.value();
            let (lj, li) = (&first.subsystems[j].label, &first.subsystems[i].label);
            if beta_i > 0.0 && beta_i.is_finite() {
                let snaps = self.trajectory.snapshots();
                let f0 = free_energy(&snaps[0][j], beta_i)?;
                let mut samples = Vec::with_capacity(rows.len());
                for (k, r) in rows.iter().enumerate() {
                    let df = free_energy(&snaps[k][j], beta_i)? - f0;
                    // W_i + W_C >= Delta F_j[beta_i(0)] + Delta E_int
                    let w_c = self.trajectory.w_c().map_or(0.0, |w| w[k]);
                    samples.push((r.t, df + r.delta_e_int - r.subsystems[i].work - w_c));
                }
                self.assert_excess(
                    &format!("free_energy_{lj}"),
                    &format!("W_{li} + W_C >= Delta F_{lj}[beta_{li}(0)] + Delta E_int"),
                    samples,
                    BOUND_TOL,
                );
            }
            if first.subsystems[i].gen_ergotropy.abs() <= FOM_GATE && beta_i.is_finite() {
                let e0 = first.subsystems[i].energy;
                let s0 = first.subsystems[j].entropy;
                let samples: Vec<(f64, f64)> = rows
                    .iter()
                    .map(|r| {
                        let sigma_0 = r.subsystems[j].entropy - s0 + beta_i * (r.subsystems[i].energy - e0);
                        (r.t, r.subsystems[j].sigma - sigma_0)
                    })
                    .collect();
                self.assert_excess(
                    &format!("hierarchy_{lj}"),
                    &format!("sigma_{lj} <= Delta S_{lj} + beta_{li}(0) Delta E_{li} ({li} starts thermal)"),
                    samples,
                    1e-10,
                );
            }
        }
        Ok(())
    }
}
