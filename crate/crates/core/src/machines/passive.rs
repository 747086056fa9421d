use super::bipartite::{run_engine, two_qubit_params};
use super::report::{BlockSummary, MachineReport, BOUND_TOL};
use crate::dynamics::{ledger, simulate, CompositeSystem, TimeGrid, Trajectory};
use crate::error::{Error, Result};
use crate::models::{make_coupling, passive_qudit, qubit, Coupling, PassiveQuditSpec, TwoQubitParams};
use crate::quantum::{c, embed_levels, max_abs, CMatrix, DensityMatrix, SubsystemLayout};
use crate::thermo::thermal_state;

/// Agreement required between the active block and the two-qubit engine.
pub const BLOCK_TOL: f64 = 1e-9;

/// Composite indices of `|a>|b>` with `b` in the two lowest qudit levels, in two-qubit order.
fn active_indices(d_b: usize) -> [usize; 4] {
    [0, 1, d_b, d_b + 1]
}

fn active_block(rho: &DensityMatrix, idx: &[usize; 4]) -> (f64, CMatrix) {
    let block = CMatrix::from_fn(4, 4, |r, col| rho.matrix()[(idx[r], idx[col])]);
    let weight: f64 = (0..4).map(|k| block[(k, k)].re).sum();
    (weight, block)
}

/// Qubit `A` coupled to the two lowest levels of a passive, non-thermal qudit `B` whose
/// effective temperature equals that of `A`. The dynamics restricted to those levels must
/// reproduce the two-qubit engine built from `engine`.
pub fn passive_extraction(spec: &PassiveQuditSpec, engine: &TwoQubitParams, grid: &TimeGrid) -> Result<MachineReport> {
    if !matches!(engine.coupling, Coupling::Xy { .. }) {
        return Err(Error::InvalidArgument("passive extraction reproduces the xy-coupled engine".into()));
    }
    let consistent = spec.omega_b == engine.omega_b && spec.beta_b0 == engine.beta_b0 && spec.beta_target == engine.beta_a0;
    if !consistent {
        return Err(Error::InvalidArgument(
            "qudit omega_b, beta_b0 and beta_target must equal the engine's omega_b, beta_b and beta_a".into(),
        ));
    }
    let qudit = passive_qudit(spec)?;
    let d_b = spec.d + 2;
    let layout = SubsystemLayout::pair(2, d_b);
    let v4 = make_coupling(engine.coupling, &SubsystemLayout::pair(2, 2))?;
    let v = embed_levels(&v4, &layout, &["A", "B"], &[&[0, 1], &[0, 1]])?;
    let h_a = qubit(engine.omega_a);
    let rho_a = thermal_state(&h_a, engine.beta_a0)?;
    let system = CompositeSystem::new(layout, vec![h_a.clone(), qudit.hamiltonian.clone()], v, vec![rho_a.clone(), qudit.state.clone()])?;
    let traj = simulate(&system, grid)?;
    let rows = ledger(&traj)?;

    let mut params = two_qubit_params(engine);
    params.push(("d".into(), spec.d as f64));
    params.push(("omega_2".into(), spec.omega_2));
    params.push(("beta_2".into(), qudit.beta_2));
    let mut report = MachineReport::new("passive_qudit", params, engine.omega(), traj, rows);
    report.assert_second_laws(BOUND_TOL);
    report.assert_two_body_laws()?;

    let b0 = &report.trajectory.snapshots()[0][1];
    report.assert_identity(
        "qudit_initial",
        "initial qudit: zero ergotropy and effective temperature beta_A(0)",
        [(0.0, b0.ergotropy), (0.0, b0.beta.value() - engine.beta_a0)],
        1e-8,
    );

    // Conditional state on the active block, compared with the engine.
    let idx = active_indices(d_b);
    let mut block_states = Vec::with_capacity(report.trajectory.len());
    let mut weight = 0.0;
    let mut mixture_dev = 0.0f64;
    let engine_report = run_engine(engine, grid)?;
    for (k, rho) in report.trajectory.states().iter().enumerate() {
        let (w, block) = active_block(rho, &idx);
        if k == 0 {
            weight = w;
        }
        let conditional = DensityMatrix::new(block * c(1.0 / w))?;
        // rho_A(t) = w rho_A^engine(t) + (1 - w) w_A
        let engine_a = &engine_report.trajectory.marginals()[k][0];
        let mixture = engine_a.matrix() * c(w) + rho_a.matrix() * c(1.0 - w);
        mixture_dev = mixture_dev.max(max_abs(&(mixture - report.trajectory.marginals()[k][0].matrix())));
        block_states.push(conditional);
    }
    let engine_system = engine.system()?;
    let block_traj = Trajectory::from_states(&engine_system, grid.times().to_vec(), block_states, None)?;
    let block_rows = ledger(&block_traj)?;
    let work_dev = block_rows
        .iter()
        .zip(&engine_report.rows)
        .map(|(a, b)| (a.t, a.subsystems[0].work - b.subsystems[0].work))
        .collect::<Vec<_>>();
    let max_work_deviation = work_dev.iter().fold(0.0f64, |m, (_, x)| m.max(x.abs()));
    report.assert_identity("active_block_work", "W_A of the active block equals the engine's W_A", work_dev, BLOCK_TOL);
    report.assert_identity(
        "marginal_mixture",
        "rho_A(t) = P rho_A^engine(t) + (1 - P) w_A[beta_A(0)]",
        [(grid.end(), mixture_dev)],
        BLOCK_TOL,
    );

    let u = crate::quantum::propagator(&system.total_hamiltonian()?, grid.end())?;
    let mut p = CMatrix::zeros(2 * d_b, 2 * d_b);
    for &i in &idx {
        p[(i, i)] = c(1.0);
    }
    let commutator = max_abs(&(u.matrix() * &p - &p * u.matrix()));
    report.assert_identity("block_diagonal", "[U(t), P] = 0 for the active-block projector", [(grid.end(), commutator)], 1e-10);
    report.block = Some(BlockSummary {
        beta_2: qudit.beta_2,
        block_weight: weight,
        max_work_deviation,
        max_mixture_deviation: mixture_dev,
        max_commutator: commutator,
    });
    Ok(report)
}
