use super::system::{CompositeSystem, TimeGrid};
use crate::error::{Error, Result};
use crate::quantum::{
    correlation_info, marginals, vn_entropy, DensityMatrix, Operator, SpectralPropagator, SubsystemLayout,
};
use crate::thermo::{snapshot_with, Spectrum, ThermalSnapshot};

/// Sampled joint states with per-subsystem thermodynamic snapshots.
#[derive(Clone, Debug)]
pub struct Trajectory {
    layout: SubsystemLayout,
    local_hamiltonians: Vec<Operator>,
    coupling: Operator,
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    marginals: Vec<Vec<DensityMatrix>>,
    snapshots: Vec<Vec<ThermalSnapshot>>,
    e_int: Vec<f64>,
    i_tot: Vec<f64>,
    gate: Option<Vec<f64>>,
    w_c: Option<Vec<f64>>,
}

impl Trajectory {
    /// Builds a trajectory from externally supplied joint states. `gate`, when
    /// present, scales the coupling at each sample.
    pub fn from_states(
        system: &CompositeSystem,
        times: Vec<f64>,
        states: Vec<DensityMatrix>,
        gate: Option<Vec<f64>>,
    ) -> Result<Self> {
        TimeGrid::new(times.clone())?;
        if states.len() != times.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), found: states.len() });
        }
        if let Some(g) = &gate {
            if g.len() != times.len() {
                return Err(Error::DimensionMismatch { expected: times.len(), found: g.len() });
            }
        }
        let layout = system.layout().clone();
        let spectra: Vec<Spectrum> = system.local_hamiltonians().iter().map(Spectrum::of).collect::<Result<_>>()?;
        let mut all_marginals = Vec::with_capacity(states.len());
        let mut snapshots = Vec::with_capacity(states.len());
        let mut e_int = Vec::with_capacity(states.len());
        let mut i_tot = Vec::with_capacity(states.len());
        for (k, rho) in states.iter().enumerate() {
            if rho.dim() != layout.total_dim() {
                return Err(Error::DimensionMismatch { expected: layout.total_dim(), found: rho.dim() });
            }
            let parts = marginals(rho, &layout)?;
            let snaps = parts
                .iter()
                .zip(system.local_hamiltonians())
                .zip(&spectra)
                .zip(layout.labels())
                .map(|(((part, h), spectrum), label)| snapshot_with(spectrum, h, part, label))
                .collect::<Result<Vec<_>>>()?;
            let scale = gate.as_ref().map_or(1.0, |g| g[k]);
            e_int.push(scale * system.coupling().expectation(rho));
            i_tot.push(correlation_info(rho, &layout)?);
            all_marginals.push(parts);
            snapshots.push(snaps);
        }
        Ok(Trajectory {
            layout,
            local_hamiltonians: system.local_hamiltonians().to_vec(),
            coupling: system.coupling().clone(),
            times,
            states,
            marginals: all_marginals,
            snapshots,
            e_int,
            i_tot,
            gate,
            w_c: None,
        })
    }

    pub(crate) fn with_work_series(mut self, w_c: Vec<f64>) -> Self {
        self.w_c = Some(w_c);
        self
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn local_hamiltonians(&self) -> &[Operator] {
        &self.local_hamiltonians
    }

    pub fn coupling(&self) -> &Operator {
        &self.coupling
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// Per-sample marginals in layout order.
    pub fn marginals(&self) -> &[Vec<DensityMatrix>] {
        &self.marginals
    }

    /// Per-sample snapshots in layout order.
    pub fn snapshots(&self) -> &[Vec<ThermalSnapshot>] {
        &self.snapshots
    }

    /// Coupling energy per sample (`G(t) <V>` for gated runs).
    pub fn e_int(&self) -> &[f64] {
        &self.e_int
    }

    pub fn i_tot(&self) -> &[f64] {
        &self.i_tot
    }

    pub fn gate(&self) -> Option<&[f64]> {
        self.gate.as_deref()
    }

    /// Cumulative work delivered through the time dependence of the gated coupling.
    pub fn w_c(&self) -> Option<&[f64]> {
        self.w_c.as_deref()
    }

    /// Snapshot series of one subsystem.
    pub fn series(&self, label: &str) -> Result<Vec<&ThermalSnapshot>> {
        let k = self.layout.index_of(label)?;
        Ok(self.snapshots.iter().map(|s| &s[k]).collect())
    }

    /// Total energy `sum_i E_i + E_int` per sample.
    pub fn total_energy(&self) -> Vec<f64> {
        self.snapshots
            .iter()
            .zip(&self.e_int)
            .map(|(s, e)| s.iter().map(|x| x.energy).sum::<f64>() + e)
            .collect()
    }

    /// Joint Von Neumann entropy per sample.
    pub fn joint_entropy(&self) -> Result<Vec<f64>> {
        self.states.iter().map(vn_entropy).collect()
    }
}

/// Exact propagation under the time-independent `sum_i H_i + V`, from one
/// eigendecomposition of the total Hamiltonian.
pub fn simulate(system: &CompositeSystem, grid: &TimeGrid) -> Result<Trajectory> {
    let propagator = SpectralPropagator::new(&system.total_hamiltonian()?)?;
    let rho0 = system.initial_state();
    let states = grid.times().iter().map(|&t| rho0.evolve(&propagator.at(t))).collect();
    Trajectory::from_states(system, grid.times().to_vec(), states, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{max_abs, SubsystemLayout};

    #[test]
    fn zero_coupling_keeps_marginals() {
        let layout = SubsystemLayout::pair(2, 3);
        let ha = Operator::diagonal(&[-0.5, 0.5]);
        let hb = Operator::diagonal(&[0.0, 0.8, 1.3]);
        let ra = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let rb = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let sys = CompositeSystem::new(layout, vec![ha, hb], Operator::zeros(6), vec![ra.clone(), rb.clone()]).unwrap();
        let traj = simulate(&sys, &TimeGrid::uniform(3.0, 7).unwrap()).unwrap();
        for m in traj.marginals() {
            assert!(max_abs(&(m[0].matrix() - ra.matrix())) < 1e-14);
            assert!(max_abs(&(m[1].matrix() - rb.matrix())) < 1e-14);
        }
        assert!(traj.i_tot().iter().all(|i| i.abs() < 1e-13));
    }
}
