use crate::error::{Error, Result};
use crate::quantum::{
    correlation_info, marginals, max_abs, product_state, tensor_embed, DensityMatrix, Operator, SubsystemLayout,
};

/// Tolerance for the product-state reconstruction of an initial state.
pub const FACTORIZATION_TOL: f64 = 1e-10;

/// Subsystems with local Hamiltonians, a coupling on the full space and an initial state.
#[derive(Clone, Debug)]
pub struct CompositeSystem {
    layout: SubsystemLayout,
    local_hamiltonians: Vec<Operator>,
    coupling: Operator,
    initial_state: DensityMatrix,
    correlated: bool,
}

impl CompositeSystem {
    /// Uncorrelated initial state built from per-slot states in layout order.
    pub fn new(
        layout: SubsystemLayout,
        local_hamiltonians: Vec<Operator>,
        coupling: Operator,
        local_states: Vec<DensityMatrix>,
    ) -> Result<Self> {
        if local_states.len() != layout.len() {
            return Err(Error::DimensionMismatch { expected: layout.len(), found: local_states.len() });
        }
        for (state, &d) in local_states.iter().zip(layout.dims()) {
            if state.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: state.dim() });
            }
        }
        let initial_state = product_state(&local_states)?;
        Self::assemble(layout, local_hamiltonians, coupling, initial_state, false)
    }

    /// Arbitrary joint initial state. Unless `allow_correlated` is set, the state must be
    /// the product of its marginals.
    pub fn with_joint_state(
        layout: SubsystemLayout,
        local_hamiltonians: Vec<Operator>,
        coupling: Operator,
        initial_state: DensityMatrix,
        allow_correlated: bool,
    ) -> Result<Self> {
        if initial_state.dim() != layout.total_dim() {
            return Err(Error::DimensionMismatch { expected: layout.total_dim(), found: initial_state.dim() });
        }
        let rebuilt = product_state(&marginals(&initial_state, &layout)?)?;
        let factorized = max_abs(&(rebuilt.matrix() - initial_state.matrix())) <= FACTORIZATION_TOL;
        if !factorized && !allow_correlated {
            return Err(Error::CorrelatedInitialState(correlation_info(&initial_state, &layout)?));
        }
        Self::assemble(layout, local_hamiltonians, coupling, initial_state, !factorized)
    }

    fn assemble(
        layout: SubsystemLayout,
        local_hamiltonians: Vec<Operator>,
        coupling: Operator,
        initial_state: DensityMatrix,
        correlated: bool,
    ) -> Result<Self> {
        if local_hamiltonians.len() != layout.len() {
            return Err(Error::DimensionMismatch { expected: layout.len(), found: local_hamiltonians.len() });
        }
        for (h, &d) in local_hamiltonians.iter().zip(layout.dims()) {
            if h.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: h.dim() });
            }
            h.require_hermitian()?;
        }
        if coupling.dim() != layout.total_dim() {
            return Err(Error::DimensionMismatch { expected: layout.total_dim(), found: coupling.dim() });
        }
        coupling.require_hermitian()?;
        Ok(CompositeSystem { layout, local_hamiltonians, coupling, initial_state, correlated })
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

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.initial_state
    }

    /// Whether the initial state carries correlations (only possible through the override).
    pub fn is_correlated(&self) -> bool {
        self.correlated
    }

    /// `sum_i H_i (x) 1`, without the coupling.
    pub fn free_hamiltonian(&self) -> Result<Operator> {
        let mut total = Operator::zeros(self.layout.total_dim());
        for (h, label) in self.local_hamiltonians.iter().zip(self.layout.labels()) {
            total = &total + &tensor_embed(h, &self.layout, &[label.as_str()])?;
        }
        Ok(total)
    }

    /// `sum_i H_i + V`.
    pub fn total_hamiltonian(&self) -> Result<Operator> {
        Ok(&self.free_hamiltonian()? + &self.coupling)
    }
}

/// Sampling times, starting at 0 and strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidArgument("a time grid needs at least two points".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidArgument("time grid must start at 0".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("time grid must be finite and strictly increasing".into()));
        }
        Ok(TimeGrid { times })
    }

    /// `points` equally spaced samples on `[0, t_max]`.
    pub fn uniform(t_max: f64, points: usize) -> Result<Self> {
        if points < 2 || !(t_max > 0.0) {
            return Err(Error::InvalidArgument(format!("uniform grid needs t_max > 0 and at least two points (got {t_max}, {points})")));
        }
        let step = t_max / (points - 1) as f64;
        let mut times: Vec<f64> = (0..points).map(|k| k as f64 * step).collect();
        times[points - 1] = t_max;
        TimeGrid::new(times)
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

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::CMatrix;
    use num_complex::Complex64;

    fn qubit() -> Operator {
        Operator::diagonal(&[-0.5, 0.5])
    }

    #[test]
    fn correlated_state_needs_override() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = Complex64::new(0.0, 0.0);
        let bell = DensityMatrix::pure(&[Complex64::new(s, 0.0), zero, zero, Complex64::new(s, 0.0)]).unwrap();
        let layout = SubsystemLayout::pair(2, 2);
        let hs = vec![qubit(), qubit()];
        let v = Operator::zeros(4);
        assert!(matches!(
            CompositeSystem::with_joint_state(layout.clone(), hs.clone(), v.clone(), bell.clone(), false),
            Err(Error::CorrelatedInitialState(_))
        ));
        let sys = CompositeSystem::with_joint_state(layout, hs, v, bell, true).unwrap();
        assert!(sys.is_correlated());
    }

    #[test]
    fn product_state_passes_factorization() {
        let layout = SubsystemLayout::pair(2, 2);
        let rho = DensityMatrix::diagonal(&[0.8, 0.2]).unwrap().kron(&DensityMatrix::diagonal(&[0.4, 0.6]).unwrap());
        let sys = CompositeSystem::with_joint_state(layout, vec![qubit(), qubit()], Operator::zeros(4), rho, false).unwrap();
        assert!(!sys.is_correlated());
    }

    #[test]
    fn non_hermitian_coupling_is_rejected() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        let layout = SubsystemLayout::pair(2, 2);
        let states = vec![DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2)];
        let v = Operator::new(m).unwrap();
        assert!(matches!(
            CompositeSystem::new(layout, vec![qubit(), qubit()], v, states),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(vec![0.1, 0.2]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.2, 0.2]).is_err());
        let g = TimeGrid::uniform(2.0, 5).unwrap();
        assert_eq!(g.times(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
    }
}
