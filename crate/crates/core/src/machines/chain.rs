use std::f64::consts::PI;

use super::clock::clock_machine;
use super::report::{MachineReport, BOUND_TOL};
use crate::dynamics::{ledger, simulate, CompositeSystem, GateSchedule, TimeGrid};
use crate::error::{Error, Result};
use crate::models::{make_coupling, qubit, rotated_thermal, Axis, Coupling};
use crate::quantum::{tensor_embed, SubsystemLayout};

/// Three qubits in a line, `A - B - C`, with exchange couplings between neighbours.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainParams {
    pub omegas: [f64; 3],
    pub betas: [f64; 3],
    /// Rotation of the middle qubit's initial state about x.
    pub phi_b: f64,
    pub g_ab: f64,
    pub g_bc: f64,
}

impl ChainParams {
    pub fn default_chain() -> Self {
        ChainParams { omegas: [1.0, 1.25, 1.5], betas: [2.0, 1.8, 0.5], phi_b: 0.055 * PI, g_ab: 0.5, g_bc: 0.4 }
    }

    pub fn system(&self) -> Result<CompositeSystem> {
        if self.omegas.iter().any(|w| !(*w > 0.0)) || self.betas.iter().any(|b| !(*b >= 0.0)) {
            return Err(Error::InvalidArgument("chain needs positive frequencies and nonnegative betas".into()));
        }
        let layout = SubsystemLayout::new(vec![2, 2, 2], vec!["A", "B", "C"])?;
        let pair = SubsystemLayout::pair(2, 2);
        let v_ab = tensor_embed(&make_coupling(Coupling::Exchange { g: self.g_ab }, &pair)?, &layout, &["A", "B"])?;
        let v_bc = tensor_embed(&make_coupling(Coupling::Exchange { g: self.g_bc }, &pair)?, &layout, &["B", "C"])?;
        let hs: Vec<_> = self.omegas.iter().map(|&w| qubit(w)).collect();
        let states = vec![
            rotated_thermal(&hs[0], self.betas[0], 0.0, Axis::X)?,
            rotated_thermal(&hs[1], self.betas[1], self.phi_b, Axis::X)?,
            rotated_thermal(&hs[2], self.betas[2], 0.0, Axis::X)?,
        ];
        CompositeSystem::new(layout, hs, &v_ab + &v_bc, states)
    }

    fn params(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        for (k, label) in ["a", "b", "c"].iter().enumerate() {
            out.push((format!("omega_{label}"), self.omegas[k]));
            out.push((format!("beta_{label}"), self.betas[k]));
        }
        out.extend([("phi".to_string(), self.phi_b), ("g_ab".into(), self.g_ab), ("g_bc".into(), self.g_bc)]);
        out
    }
}

/// Static three-qubit chain: per-subsystem entropy production and the multi-body Clausius sum.
pub fn run_chain(params: &ChainParams, grid: &TimeGrid) -> Result<MachineReport> {
    let traj = simulate(&params.system()?, grid)?;
    let rows = ledger(&traj)?;
    let mut report = MachineReport::new("chain", params.params(), params.omegas[0], traj, rows);
    report.assert_second_laws(BOUND_TOL);
    Ok(report)
}

/// Three-qubit chain whose couplings are switched by a clock.
pub fn run_gated_chain(params: &ChainParams, schedule: &GateSchedule, grid: &TimeGrid) -> Result<MachineReport> {
    let mut report = clock_machine(&params.system()?, schedule, grid)?;
    report.scenario = "gated_chain".into();
    let mut p = params.params();
    p.append(&mut report.params);
    report.params = p;
    Ok(report)
}
