use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::thermo::{beta_times, entropy_production, heat_work, thermal_distance_with, EffectiveBeta, Spectrum};

/// Per-subsystem entries of a ledger row, all changes taken relative to `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsystemRow {
    pub label: String,
    pub energy: f64,
    pub entropy: f64,
    pub beta: EffectiveBeta,
    pub thermal_energy: f64,
    pub ergotropy: f64,
    pub gen_ergotropy: f64,
    /// Heat provided, `-Delta E_th`.
    pub heat: f64,
    /// Work provided, `-Delta E - Q`.
    pub work: f64,
    /// `Delta S_j - sum_{i != j} beta_i(0) Q_i`.
    pub sigma: f64,
    /// `Delta S_j - sum_{i != j} int beta_i dQ_i`.
    pub tighter_sigma: f64,
    /// `D(w[beta(t)] || w[beta(0)])`.
    pub thermal_distance: f64,
    /// `sigma - Delta I_tot - sum_{i != j} D_i`; zero for unitary dynamics.
    pub identity_residual: f64,
    /// `Delta S + D + beta(0) Q`; zero for any state path.
    pub thermal_residual: f64,
}

/// One sample of the thermodynamic ledger.
#[derive(Clone, Debug, PartialEq)]
pub struct LedgerRow {
    pub t: f64,
    pub subsystems: Vec<SubsystemRow>,
    pub e_int: f64,
    pub delta_e_int: f64,
    pub i_tot: f64,
    /// `-sum_j beta_j(0) Q_j`.
    pub clausius_sum: f64,
    /// `clausius_sum - Delta I_tot`.
    pub corr_adjusted_lhs: f64,
    /// `-sum_j int beta_j dQ_j`.
    pub tighter_clausius: f64,
    /// `sum_i Delta E_i + Delta E_int - W_C`, with `W_C = 0` for static couplings.
    pub energy_residual: f64,
}

impl LedgerRow {
    pub fn subsystem(&self, label: &str) -> Result<&SubsystemRow> {
        self.subsystems
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

/// Assembles heat, work and entropy-production terms for every sample.
/// Path integrals use the trapezoidal rule on the trajectory's own grid.
pub fn ledger(traj: &Trajectory) -> Result<Vec<LedgerRow>> {
    if traj.len() < 2 {
        return Err(Error::InvalidArgument("ledger needs at least two samples".into()));
    }
    let spectra: Vec<Spectrum> = traj.local_hamiltonians().iter().map(Spectrum::of).collect::<Result<_>>()?;
    let snaps = traj.snapshots();
    let first = &snaps[0];
    let n_sub = first.len();
    let i0 = traj.i_tot()[0];
    let e_int0 = traj.e_int()[0];
    let mut flows = vec![0.0; n_sub];
    let mut rows = Vec::with_capacity(traj.len());
    for (k, current) in snaps.iter().enumerate() {
        if k > 0 {
            // int beta dQ = -int beta dE_th, one trapezoid per subsystem
            for (j, flow) in flows.iter_mut().enumerate() {
                let prev = &snaps[k - 1][j];
                let now = &current[j];
                let mean_beta = 0.5 * (prev.beta.value() + now.beta.value());
                *flow -= beta_times(mean_beta, now.thermal_energy - prev.thermal_energy);
            }
        }
        let i_tot = traj.i_tot()[k];
        let ep = entropy_production(first, current, i0, i_tot, None)?;
        let distances: Vec<f64> = (0..n_sub)
            .map(|j| thermal_distance_with(&spectra[j], current[j].beta, first[j].beta))
            .collect();
        let flow_total: f64 = flows.iter().sum();
        let distance_total: f64 = distances.iter().sum();
        let mut subsystems = Vec::with_capacity(n_sub);
        let mut delta_e = 0.0;
        for j in 0..n_sub {
            let (s0, st) = (&first[j], &current[j]);
            let hw = heat_work(s0, st)?;
            let ds = st.entropy - s0.entropy;
            delta_e += st.energy - s0.energy;
            subsystems.push(SubsystemRow {
                label: st.label.clone(),
                energy: st.energy,
                entropy: st.entropy,
                beta: st.beta,
                thermal_energy: st.thermal_energy,
                ergotropy: st.ergotropy,
                gen_ergotropy: st.gen_ergotropy,
                heat: hw.heat,
                work: hw.work,
                sigma: ep.sigma[j],
                tighter_sigma: ds - (flow_total - flows[j]),
                thermal_distance: distances[j],
                identity_residual: ep.sigma[j] - (i_tot - i0) - (distance_total - distances[j]),
                thermal_residual: ds + distances[j] + beta_times(s0.beta.value(), hw.heat),
            });
        }
        let delta_e_int = traj.e_int()[k] - e_int0;
        let w_c = traj.w_c().map_or(0.0, |w| w[k]);
        rows.push(LedgerRow {
            t: traj.times()[k],
            subsystems,
            e_int: traj.e_int()[k],
            delta_e_int,
            i_tot,
            clausius_sum: ep.clausius_sum,
            corr_adjusted_lhs: ep.corr_adjusted_lhs,
            tighter_clausius: -flow_total,
            energy_residual: delta_e + delta_e_int - w_c,
        });
    }
    Ok(rows)
}
