//! Scenario runners: the two-qubit refrigerator and engine, coupling sweeps, refined
//! bounds, the qutrit counterexample, the passive-qudit engine and clock-gated machines.

mod bipartite;
mod chain;
mod clock;
mod counterexample;
mod passive;
mod report;

pub use bipartite::{
    average_betas, average_betas_exact, first_peak, refined_bounds, run_engine, run_refrigerator, sweep_coupling,
    AVERAGE_BETA_TOL, REFINED_GATE,
};
pub use chain::{run_chain, run_gated_chain, ChainParams};
pub use clock::{clock_machine, CLOCK_TOL};
pub use counterexample::{counterexample_qutrit, swap_machine, QutritSwapParams, QUBIT_ERG_TOL, SWAP_NEGATIVITY};
pub use passive::{passive_extraction, BLOCK_TOL};
pub use report::{BlockSummary, Check, ClockSummary, FigureOfMerit, MachineReport, SwapSummary, Violation, BOUND_TOL, FOM_GATE};
