use thiserror::Error;

/// Errors raised by the simulation and ledger routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("target entropy {target} exceeds log d = {max}")]
    EntropyOutOfRange { target: f64, max: f64 },

    #[error("effective temperature undefined: Hamiltonian is proportional to the identity and S = {entropy} < log d")]
    UndefinedTemperature { entropy: f64 },

    #[error("target energy {target} outside the open spectral interval ({min}, {max})")]
    EnergyOutOfRange { target: f64, min: f64, max: f64 },

    #[error("snapshot labels differ: `{0}` vs `{1}`")]
    LabelMismatch(String, String),

    #[error("average temperature undefined: thermal-energy change {0:.3e} is degenerate")]
    DegenerateThermalChange(f64),

    #[error("initial state outside family orbit (infidelity {infidelity:.3e})")]
    OrbitMismatch { infidelity: f64 },

    #[error("dimension too small: S[w_B'(beta_B)] = {qubit_entropy} > S[w_B(beta_target)] = {target_entropy}")]
    DimensionTooSmall { qubit_entropy: f64, target_entropy: f64 },

    #[error("refinement needed: gate changes by {delta:.3e} > {limit} in the step starting at t = {t}")]
    StepTooCoarse { t: f64, delta: f64, limit: f64 },

    #[error("temperature ordering violated: beta_A(0) = {beta_a} must exceed beta_B(0) = {beta_b}")]
    TemperatureOrdering { beta_a: f64, beta_b: f64 },

    #[error("gate must vanish at both ends of the grid (G(start) = {start}, G(end) = {end})")]
    GateEndpoint { start: f64, end: f64 },

    #[error("initial state is correlated (I_tot = {0:.3e}); enable correlated initial states explicitly")]
    CorrelatedInitialState(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
