//! Hamiltonians, couplings and initial states of the shipped machines, plus the
//! closed-form two-qubit exchange solution.
//!
//! Basis convention: index 0 is the ground level. For qubits this gives
//! `sigma_z = diag(-1, 1)` and `H = (omega / 2) sigma_z = diag(-omega / 2, omega / 2)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::CompositeSystem;
use crate::error::{Error, Result};
use crate::quantum::{shannon, CMatrix, DensityMatrix, Operator, SubsystemLayout};
use crate::thermo::thermal_state;

/// Scale applied to the literal `g sigma_+ sigma_- / 2 + h.c.` with `sigma_+- = sigma_x +- i sigma_y`,
/// so that the flip-flop amplitude is `g / 2` and the exchange frequency is `sqrt(g^2 + (omega_A - omega_B)^2)`.
pub const EXCHANGE_CALIBRATION: f64 = 0.25;

/// `[sigma_x, sigma_y, sigma_z]` in the (ground, excited) basis.
pub fn pauli() -> [Operator; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let x = CMatrix::from_row_slice(2, 2, &[z, one, one, z]);
    let y = CMatrix::from_row_slice(2, 2, &[z, i, -i, z]);
    [
        Operator::hermitian(x).expect("sigma_x"),
        Operator::hermitian(y).expect("sigma_y"),
        Operator::diagonal(&[-1.0, 1.0]),
    ]
}

/// Local Hamiltonian constructors.
#[derive(Clone, Debug, PartialEq)]
pub enum SubsystemKind {
    /// `(omega / 2) sigma_z`.
    Qubit { omega: f64 },
    /// `sum_k e_k |k><k|`.
    Qudit { energies: Vec<f64> },
}

pub fn make_subsystem(kind: &SubsystemKind) -> Result<Operator> {
    let energies = match kind {
        SubsystemKind::Qubit { omega } => vec![-omega / 2.0, omega / 2.0],
        SubsystemKind::Qudit { energies } => energies.clone(),
    };
    if energies.is_empty() || energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidArgument("energies must be finite and nonempty".into()));
    }
    Ok(Operator::diagonal(&energies))
}

pub fn qubit(omega: f64) -> Operator {
    Operator::diagonal(&[-omega / 2.0, omega / 2.0])
}

/// Qudit with levels `0, omega_b` followed by `d` levels at `omega_2`.
pub fn passive_qudit_hamiltonian(omega_b: f64, omega_2: f64, d: usize) -> Operator {
    let mut energies = vec![0.0, omega_b];
    energies.extend(std::iter::repeat_n(omega_2, d));
    Operator::diagonal(&energies)
}

/// Rotation axis for [`rotated_thermal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// `exp(-i phi sigma) w[beta] exp(i phi sigma)` for a qubit Hamiltonian.
pub fn rotated_thermal(h: &Operator, beta: f64, phi: f64, axis: Axis) -> Result<DensityMatrix> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: h.dim() });
    }
    let [x, y, z] = pauli();
    let sigma = match axis {
        Axis::X => x,
        Axis::Y => y,
        Axis::Z => z,
    };
    // exp(-i phi sigma) = cos(phi) 1 - i sin(phi) sigma
    let u = CMatrix::identity(2, 2) * Complex64::new(phi.cos(), 0.0) + sigma.matrix() * Complex64::new(0.0, -phi.sin());
    let w = thermal_state(h, beta)?;
    Ok(DensityMatrix::from_trusted(&u * w.matrix() * u.adjoint()))
}

/// Two-body couplings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coupling {
    /// Exchange between two qubits, normalized by [`EXCHANGE_CALIBRATION`].
    Exchange { g: f64 },
    /// `gx sigma_x sigma_x / 2 + gy sigma_y sigma_y / 2`.
    Xy { gx: f64, gy: f64 },
    /// `g sum_{k != l} |kl><lk|` between two systems of equal dimension.
    Swap { g: f64 },
}

impl Coupling {
    /// Characteristic frequency used for time units.
    pub fn omega(&self, omega_a: f64, omega_b: f64) -> f64 {
        let detuning = omega_b - omega_a;
        match *self {
            Coupling::Exchange { g } => (g * g + detuning * detuning).sqrt(),
            Coupling::Xy { gx, gy } => (gx * gx + gy * gy + detuning * detuning).sqrt(),
            Coupling::Swap { g } => g,
        }
    }
}

/// Coupling operator on a two-slot layout.
pub fn make_coupling(kind: Coupling, layout: &SubsystemLayout) -> Result<Operator> {
    if layout.len() != 2 {
        return Err(Error::InvalidArgument("two-body coupling needs a two-slot layout".into()));
    }
    let (da, db) = (layout.dims()[0], layout.dims()[1]);
    let [x, y, _] = pauli();
    let qubits = || -> Result<()> {
        if da != 2 || db != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: if da != 2 { da } else { db } });
        }
        Ok(())
    };
    match kind {
        Coupling::Exchange { g } => {
            qubits()?;
            let i = Complex64::new(0.0, 1.0);
            let plus = x.matrix() + y.matrix() * i;
            let minus = x.matrix() - y.matrix() * i;
            let half = plus.kronecker(&minus) * Complex64::new(g / 2.0, 0.0);
            let v = (&half + half.adjoint()) * Complex64::new(EXCHANGE_CALIBRATION, 0.0);
            Operator::hermitian(v)
        }
        Coupling::Xy { gx, gy } => {
            qubits()?;
            let v = x.kron(&x).scale(gx / 2.0);
            Ok(&v + &y.kron(&y).scale(gy / 2.0))
        }
        Coupling::Swap { g } => {
            if da != db {
                return Err(Error::DimensionMismatch { expected: da, found: db });
            }
            let d = da;
            let mut v = CMatrix::zeros(d * d, d * d);
            for k in 0..d {
                for l in 0..d {
                    if k != l {
                        v[(k * d + l, l * d + k)] = Complex64::new(g, 0.0);
                    }
                }
            }
            Operator::hermitian(v)
        }
    }
}

/// Two-qubit machine parameters, energies in units of `omega_a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitParams {
    pub omega_a: f64,
    pub omega_b: f64,
    pub beta_a0: f64,
    pub beta_b0: f64,
    pub coupling: Coupling,
    /// Rotation angle of the initial state of B about x, in radians.
    pub phi: f64,
}

impl TwoQubitParams {
    /// Refrigerator: exchange coupling, B rotated out of equilibrium.
    pub fn fig2() -> Self {
        TwoQubitParams {
            omega_a: 1.0,
            omega_b: 1.25,
            beta_a0: 2.0,
            beta_b0: 1.8,
            coupling: Coupling::Exchange { g: 0.5 },
            phi: 0.055 * PI,
        }
    }

    /// Engine: xy coupling, both qubits thermal.
    pub fn fig3() -> Self {
        TwoQubitParams {
            omega_a: 1.0,
            omega_b: 1.63,
            beta_a0: 2.0,
            beta_b0: 0.1,
            coupling: Coupling::Xy { gx: 2.0, gy: 0.8 },
            phi: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_a > 0.0 && self.omega_b > 0.0) {
            return Err(Error::InvalidArgument("qubit frequencies must be positive".into()));
        }
        if !(self.beta_a0 >= 0.0 && self.beta_b0 >= 0.0) {
            return Err(Error::InvalidArgument("inverse temperatures must be nonnegative".into()));
        }
        if matches!(self.coupling, Coupling::Swap { .. }) {
            return Err(Error::InvalidArgument("two-qubit machines use exchange or xy couplings".into()));
        }
        Ok(())
    }

    pub fn omega(&self) -> f64 {
        self.coupling.omega(self.omega_a, self.omega_b)
    }

    /// Two revival periods, `4 pi / Omega`.
    pub fn default_t_max(&self) -> f64 {
        4.0 * PI / self.omega()
    }

    pub fn layout(&self) -> SubsystemLayout {
        SubsystemLayout::pair(2, 2)
    }

    pub fn initial_states(&self) -> Result<(DensityMatrix, DensityMatrix)> {
        let a = thermal_state(&qubit(self.omega_a), self.beta_a0)?;
        let b = rotated_thermal(&qubit(self.omega_b), self.beta_b0, self.phi, Axis::X)?;
        Ok((a, b))
    }

    pub fn system(&self) -> Result<CompositeSystem> {
        self.validate()?;
        let layout = self.layout();
        let v = make_coupling(self.coupling, &layout)?;
        let (a, b) = self.initial_states()?;
        CompositeSystem::new(layout, vec![qubit(self.omega_a), qubit(self.omega_b)], v, vec![a, b])
    }
}

/// Qudit B replacing the engine's hot qubit: levels `0, omega_b` and `d` levels at `omega_2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PassiveQuditSpec {
    pub d: usize,
    pub omega_b: f64,
    pub omega_2: f64,
    /// Temperature of the two lowest levels.
    pub beta_b0: f64,
    /// Effective temperature of the whole qudit.
    pub beta_target: f64,
}

impl PassiveQuditSpec {
    /// `d = 5`, `omega_2 = 1.7`, engine temperatures.
    pub fn engine_default() -> Self {
        PassiveQuditSpec { d: 5, omega_b: 1.63, omega_2: 1.7, beta_b0: 0.1, beta_target: 2.0 }
    }
}

/// Output of [`passive_qudit`].
#[derive(Clone, Debug)]
pub struct PassiveQudit {
    pub hamiltonian: Operator,
    pub state: DensityMatrix,
    pub beta_2: f64,
    pub populations: Vec<f64>,
}

fn qudit_populations(spec: &PassiveQuditSpec, beta_2: f64) -> Vec<f64> {
    let p1 = (-spec.beta_b0 * spec.omega_b).exp();
    let pk = p1 * (-beta_2 * (spec.omega_2 - spec.omega_b)).exp();
    let mut p = vec![1.0, p1];
    p.extend(std::iter::repeat_n(pk, spec.d));
    let total: f64 = p.iter().sum();
    p.iter().map(|x| x / total).collect()
}

/// Passive, non-thermal qudit state whose effective temperature is `beta_target`.
///
/// Populations: `p_1 / p_0 = exp(-beta_b0 omega_b)` and, for the upper levels,
/// `p_k / p_1 = exp(-beta_2 (omega_2 - omega_b))`; `beta_2 >= 0` is found by bisection.
pub fn passive_qudit(spec: &PassiveQuditSpec) -> Result<PassiveQudit> {
    if spec.d == 0 || !(spec.omega_2 > spec.omega_b) || !(spec.omega_b > 0.0) {
        return Err(Error::InvalidArgument("passive qudit needs d >= 1 and omega_2 > omega_b > 0".into()));
    }
    if !(spec.beta_b0 >= 0.0 && spec.beta_target > spec.beta_b0) {
        return Err(Error::TemperatureOrdering { beta_a: spec.beta_target, beta_b: spec.beta_b0 });
    }
    let hamiltonian = passive_qudit_hamiltonian(spec.omega_b, spec.omega_2, spec.d);
    let target = shannon(&crate::thermo::Spectrum::of(&hamiltonian)?.weights(spec.beta_target));
    let p1 = (-spec.beta_b0 * spec.omega_b).exp();
    let qubit_entropy = shannon(&[1.0 / (1.0 + p1), p1 / (1.0 + p1)]);
    if qubit_entropy > target {
        return Err(Error::DimensionTooSmall { qubit_entropy, target_entropy: target });
    }
    let entropy = |b: f64| shannon(&qudit_populations(spec, b));
    if entropy(0.0) < target {
        return Err(Error::InvalidArgument(format!(
            "target entropy {target} exceeds the largest passive value {}",
            entropy(0.0)
        )));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while entropy(hi) > target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::DimensionTooSmall { qubit_entropy, target_entropy: target });
        }
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta_2 = 0.5 * (lo + hi);
    let populations = qudit_populations(spec, beta_2);
    Ok(PassiveQudit { hamiltonian, state: DensityMatrix::diagonal(&populations)?, beta_2, populations })
}

/// Passive qutrit-style state `p_k ~ exp(-beta_k omega_k)` relative to the ground level,
/// with `beta_k` taken from `betas` (entry 0 unused).
pub fn passive_state(levels: &[f64], betas: &[f64]) -> Result<DensityMatrix> {
    if levels.len() != betas.len() || levels.is_empty() {
        return Err(Error::DimensionMismatch { expected: levels.len(), found: betas.len() });
    }
    let p: Vec<f64> = levels
        .iter()
        .zip(betas)
        .enumerate()
        .map(|(k, (w, b))| if k == 0 { 1.0 } else { (-b * (w - levels[0])).exp() })
        .collect();
    if p.windows(2).any(|w| w[1] > w[0] + 1e-15) {
        return Err(Error::InvalidArgument("populations must not increase with energy".into()));
    }
    DensityMatrix::diagonal(&p)
}

/// Closed-form Bloch components of both qubits and the coupling-energy change for the
/// exchange-coupled pair, with A thermal and B rotated about x.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochComponents {
    pub x_a: f64,
    pub y_a: f64,
    pub z_a: f64,
    pub x_b: f64,
    pub y_b: f64,
    pub z_b: f64,
    pub de_int: f64,
}

/// Evaluates the closed-form solution of the exchange-coupled pair at time `t`.
/// Its x components follow the opposite precession sense to `exp(-i H t)`; the
/// simulated `x` equals `-x` from here.
pub fn analytic_two_qubit(params: &TwoQubitParams, t: f64) -> Result<BlochComponents> {
    let Coupling::Exchange { g } = params.coupling else {
        return Err(Error::InvalidArgument("closed form exists for the exchange coupling only".into()));
    };
    let (wa, wb) = (params.omega_a, params.omega_b);
    let om = params.omega();
    let ta = (wa * params.beta_a0 / 2.0).tanh();
    let tb = (wb * params.beta_b0 / 2.0).tanh();
    let (sp, cp) = params.phi.sin_cos();
    let cs = cp * sp;
    let d = wa - wb;
    let s = (wa + wb) * t / 2.0;
    let (sin_h, cos_h) = (om * t / 2.0).sin_cos();
    let cos_f = (om * t).cos();
    let om2 = om * om;
    let c2p = (2.0 * params.phi).cos();
    let x_a = 2.0 * g / om * cs * ta * tb * s.cos() * sin_h;
    let y_a = -2.0 * g / om * cs * ta * tb * s.sin() * sin_h;
    let z_a = (-(2.0 * g * g * (1.0 + cos_f) + 4.0 * d * d) * ta - 2.0 * g * g * (1.0 - cos_f) * c2p * tb) / (4.0 * om2);
    let x_b = 2.0 / om * cs * tb * (-d * s.cos() * sin_h + om * s.sin() * cos_h);
    let y_b = 2.0 / om * cs * tb * (d * s.sin() * sin_h + om * s.cos() * cos_h);
    let z_b = (-2.0 * g * g * (1.0 - cos_f) * ta - (2.0 * g * g * (1.0 + cos_f) + 4.0 * d * d) * c2p * tb) / (4.0 * om2);
    let (ea, eb) = ((wa * params.beta_a0).exp(), (wb * params.beta_b0).exp());
    let de_int = -g * g * d * (1.0 - cos_f) / (2.0 * om2) * ((ea - eb) * cp * cp + (ea * eb - 1.0) * sp * sp)
        / ((ea + 1.0) * (eb + 1.0));
    Ok(BlochComponents { x_a, y_a, z_a, x_b, y_b, z_b, de_int })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{max_abs, propagator, vn_entropy};
    use crate::thermo::state_beta;

    #[test]
    fn qubit_levels() {
        let h = make_subsystem(&SubsystemKind::Qubit { omega: 1.0 }).unwrap();
        assert_eq!(h.spectrum().unwrap(), vec![-0.5, 0.5]);
        let q = make_subsystem(&SubsystemKind::Qudit { energies: vec![0.0, 1.0, 2.2] }).unwrap();
        assert_eq!(q.spectrum().unwrap(), vec![0.0, 1.0, 2.2]);
    }

    #[test]
    fn qudit_block_layout() {
        let h = passive_qudit_hamiltonian(1.63, 1.7, 5);
        assert_eq!(h.dim(), 7);
        let diag: Vec<f64> = (0..7).map(|k| h.matrix()[(k, k)].re).collect();
        assert_eq!(diag, vec![0.0, 1.63, 1.7, 1.7, 1.7, 1.7, 1.7]);
    }

    #[test]
    fn rotation_cases() {
        let h = qubit(1.25);
        let w = thermal_state(&h, 1.8).unwrap();
        let same = rotated_thermal(&h, 1.8, 0.0, Axis::X).unwrap();
        assert!(max_abs(&(same.matrix() - w.matrix())) < 1e-15);
        let flipped = rotated_thermal(&h, 1.8, PI / 2.0, Axis::X).unwrap();
        let zw = w.bloch().unwrap()[2];
        assert!((flipped.bloch().unwrap()[2] + zw).abs() < 1e-14);
        let tilted = rotated_thermal(&h, 1.8, 0.3, Axis::X).unwrap();
        assert!((vn_entropy(&tilted).unwrap() - vn_entropy(&w).unwrap()).abs() < 1e-13);
        assert!((state_beta(&h, &tilted).unwrap().value() - 1.8).abs() < 1e-8);
        assert!(rotated_thermal(&Operator::identity(3), 1.0, 0.1, Axis::X).is_err());
    }

    #[test]
    fn couplings_are_hermitian() {
        let layout = SubsystemLayout::pair(2, 2);
        for kind in [Coupling::Exchange { g: 0.7 }, Coupling::Xy { gx: 2.0, gy: 0.8 }, Coupling::Swap { g: 1.1 }] {
            let v = make_coupling(kind, &layout).unwrap();
            assert!(crate::quantum::max_abs(&(v.matrix() - v.matrix().adjoint())) < 1e-14);
        }
        let zero = make_coupling(Coupling::Exchange { g: 0.0 }, &layout).unwrap();
        assert!(max_abs(zero.matrix()) == 0.0);
        assert!(make_coupling(Coupling::Xy { gx: 1.0, gy: 1.0 }, &SubsystemLayout::pair(2, 3)).is_err());
    }

    #[test]
    fn exchange_flip_flop_amplitude() {
        let g = 0.8;
        let v = make_coupling(Coupling::Exchange { g }, &SubsystemLayout::pair(2, 2)).unwrap();
        // |eg> = index 2, |ge> = index 1
        assert!((v.matrix()[(2, 1)].re - g / 2.0).abs() < 1e-15);
        assert!((v.matrix()[(1, 2)].re - g / 2.0).abs() < 1e-15);
        assert!(v.matrix()[(0, 3)].norm() < 1e-15);
    }

    #[test]
    fn swap_exchanges_diagonal_qutrits() {
        let g = 0.9;
        let layout = SubsystemLayout::pair(3, 3);
        let v = make_coupling(Coupling::Swap { g }, &layout).unwrap();
        let a = DensityMatrix::diagonal(&[0.6, 0.3, 0.1]).unwrap();
        let b = DensityMatrix::diagonal(&[0.5, 0.45, 0.05]).unwrap();
        let u = propagator(&v, PI / (2.0 * g)).unwrap();
        let swapped = a.kron(&b).evolve(&u);
        assert!(max_abs(&(swapped.matrix() - b.kron(&a).matrix())) < 1e-14);
    }

    #[test]
    fn appendix_values_at_start() {
        let p = TwoQubitParams::fig2();
        let c = analytic_two_qubit(&p, 0.0).unwrap();
        assert!((c.z_a + (p.beta_a0 * p.omega_a / 2.0).tanh()).abs() < 1e-15);
        assert_eq!((c.x_a, c.y_a, c.de_int), (0.0, 0.0, 0.0));
        let period = 2.0 * PI / p.omega();
        let later = analytic_two_qubit(&p, period).unwrap();
        // the (omega_a + omega_b) t / 2 phase is not a multiple of 2 pi, so only
        // the Omega-periodic components return
        assert!((later.z_a - c.z_a).abs() < 1e-14);
        assert!((later.z_b - c.z_b).abs() < 1e-14);
        assert!(later.de_int.abs() < 1e-15);
        assert!(analytic_two_qubit(&TwoQubitParams::fig3(), 1.0).is_err());
    }

    #[test]
    fn passive_qudit_reproduces_inner_temperature() {
        let out = passive_qudit(&PassiveQuditSpec::engine_default()).unwrap();
        assert!((out.beta_2 - 75.97).abs() < 0.01 * 75.97, "beta_2 = {}", out.beta_2);
        assert!(out.populations.windows(2).all(|w| w[1] <= w[0]));
        let ratio = out.populations[1] / out.populations[0];
        assert!((ratio - (-0.1f64 * 1.63).exp()).abs() < 1e-15);
        let beta = state_beta(&out.hamiltonian, &out.state).unwrap().value();
        assert!((beta - 2.0).abs() < 1e-8);
    }

    #[test]
    fn passive_qudit_existence_failure() {
        let spec = PassiveQuditSpec { d: 1, omega_b: 1.63, omega_2: 1.7, beta_b0: 0.1, beta_target: 2.0 };
        assert!(matches!(passive_qudit(&spec), Err(Error::DimensionTooSmall { .. })));
    }
}
