//! Thermal states, effective temperatures, heat and work splitting, ergotropies and
//! entropy productions.

mod accessible;
mod production;
mod snapshot;
mod thermal;

pub use accessible::{accessible_sigma, fidelity, UnitaryFamily, ORBIT_TOL};
pub use production::{
    average_beta, entropy_production, path_integral, sigma_erg, thermal_distance, EntropyProduction,
    TemperaturePath, DEGENERATE_THERMAL_CHANGE,
};
pub use snapshot::{
    ergotropy, free_energy, heat_work, minimize_preparation_cost, preparation_cost, thermal_snapshot, HeatWork,
    PreparationOptimum, ThermalSnapshot,
};
pub use thermal::{
    beta_times, effective_beta, energy_beta, state_beta, thermal_energy, thermal_state, EffectiveBeta,
    BETA_CAP_SCALE, ENTROPY_TOL,
};

pub(crate) use production::thermal_distance_with;
pub(crate) use snapshot::snapshot_with;
pub(crate) use thermal::Spectrum;
