//! Exact and gated unitary propagation of composite systems, with the per-sample ledger.

mod gated;
mod ledger;
mod probe;
mod system;
mod trajectory;

pub use gated::{simulate_gated, simulate_gated_with, GateSchedule, GateShape, DEFAULT_MAX_GATE_STEP};
pub use ledger::{ledger, LedgerRow, SubsystemRow};
pub use probe::{classify_source, ideal_source_probe, SourceDiagnostic, SourceKind, SourceSeries, SOURCE_TOL};
pub use system::{CompositeSystem, TimeGrid, FACTORIZATION_TOL};
pub use trajectory::{simulate, Trajectory};
