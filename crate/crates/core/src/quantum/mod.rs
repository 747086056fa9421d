//! Dense complex linear algebra on small composite Hilbert spaces.

mod entropy;
mod layout;
mod operator;
mod random;

pub use entropy::{correlation_info, relative_entropy, shannon, vn_entropy, LEAKAGE_TOL, SUPPORT_TOL};
pub use layout::{embed_levels, marginals, partial_trace, product_state, tensor_embed, SubsystemLayout};
pub use operator::{
    propagator, CMatrix, DensityMatrix, Eigh, Operator, SpectralPropagator, UnitaryPropagator, EIGEN_CLIP_TOL,
    HERMITIAN_TOL, TRACE_TOL, UNITARY_TOL,
};

pub use random::{random_hermitian, random_levels, random_state};

pub(crate) use entropy::clipped;
pub(crate) use operator::{c, max_abs};
