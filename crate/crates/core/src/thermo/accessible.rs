use num_complex::Complex64;

use super::thermal::Spectrum;
use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, Eigh, Operator};

/// Infidelity allowed between the fitted initial state and the reference Gibbs state.
pub const ORBIT_TOL: f64 = 1e-8;
const SCAN_POINTS: usize = 64;
const GOLDEN_TOL: f64 = 1e-8;

/// One-parameter unitary family `U[alpha] = exp(-i alpha K)` on `alpha in range`.
#[derive(Clone, Debug)]
pub struct UnitaryFamily {
    eig: Eigh,
    range: (f64, f64),
}

impl UnitaryFamily {
    pub fn new(generator: &Operator, range: (f64, f64)) -> Result<Self> {
        if !(range.0 < range.1) {
            return Err(Error::InvalidArgument("family range must be a nonempty interval".into()));
        }
        Ok(UnitaryFamily { eig: generator.eigh()?, range })
    }

    pub fn dim(&self) -> usize {
        self.eig.values.len()
    }

    pub fn apply(&self, alpha: f64, rho: &DensityMatrix) -> DensityMatrix {
        let u = self.eig.map(|e| Complex64::from_polar(1.0, -alpha * e));
        rho.conjugate_by(&u)
    }

    /// Parameter minimizing `Tr{H U[alpha] rho U^dagger[alpha]}`: coarse scan followed by
    /// golden-section refinement around the best scan point.
    pub fn energy_minimizer(&self, h: &Operator, rho: &DensityMatrix) -> f64 {
        let energy = |a: f64| h.expectation(&self.apply(a, rho));
        let (lo, hi) = self.range;
        let step = (hi - lo) / SCAN_POINTS as f64;
        let best = (0..=SCAN_POINTS)
            .map(|k| lo + step * k as f64)
            .min_by(|a, b| energy(*a).total_cmp(&energy(*b)))
            .expect("nonempty scan");
        let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - r * (b - a);
        let mut x2 = a + r * (b - a);
        let (mut f1, mut f2) = (energy(x1), energy(x2));
        while b - a > GOLDEN_TOL {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - r * (b - a);
                f1 = energy(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + r * (b - a);
                f2 = energy(x2);
            }
        }
        0.5 * (a + b)
    }
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let sqrt_rho = rho.eigh().map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0));
    let inner = &sqrt_rho * sigma.matrix() * &sqrt_rho;
    let root: f64 = Eigh::of(&inner).values.iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok(root * root)
}

/// Entropy production counting only resources reachable by `family` as work:
/// `Delta S_A - beta0 Q^alpha`, where `Q^alpha` compares the energy of the optimally
/// rotated final state of `B` with that of `w[beta0]`.
pub fn accessible_sigma(
    h_b: &Operator,
    family: &UnitaryFamily,
    rho_b0: &DensityMatrix,
    rho_bt: &DensityMatrix,
    ds_a: f64,
    beta0: f64,
) -> Result<f64> {
    if family.dim() != h_b.dim() || rho_b0.dim() != h_b.dim() || rho_bt.dim() != h_b.dim() {
        return Err(Error::DimensionMismatch { expected: h_b.dim(), found: rho_bt.dim() });
    }
    let spectrum = Spectrum::of(h_b)?;
    let reference = spectrum.state(beta0);
    let alpha0 = family.energy_minimizer(h_b, rho_b0);
    let infidelity = 1.0 - fidelity(&family.apply(alpha0, rho_b0), &reference)?;
    if infidelity > ORBIT_TOL {
        return Err(Error::OrbitMismatch { infidelity });
    }
    let alpha_t = family.energy_minimizer(h_b, rho_bt);
    let rotated = family.apply(alpha_t, rho_bt);
    let heat = -(h_b.expectation(&rotated) - h_b.expectation(&reference));
    Ok(ds_a - beta0 * heat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{pauli, rotated_thermal, Axis};
    use crate::thermo::thermal_state;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn trivial_evolution_has_zero_accessible_production() {
        let h = Operator::diagonal(&[-0.625, 0.625]);
        let [x, _, _] = pauli();
        let family = UnitaryFamily::new(&x, (-FRAC_PI_2, FRAC_PI_2)).unwrap();
        let w = thermal_state(&h, 1.8).unwrap();
        assert!(accessible_sigma(&h, &family, &w, &w, 0.0, 1.8).unwrap().abs() < 1e-12);
        let rotated = rotated_thermal(&h, 1.8, 0.3, Axis::X).unwrap();
        assert!(accessible_sigma(&h, &family, &rotated, &rotated, 0.0, 1.8).unwrap().abs() < 1e-12);
    }

    #[test]
    fn passive_qutrit_is_outside_rotation_orbit() {
        let h = Operator::diagonal(&[0.0, 1.0, 2.0]);
        let rho = DensityMatrix::diagonal(&[0.7, 0.25, 0.05]).unwrap();
        let mut k = crate::quantum::CMatrix::zeros(3, 3);
        k[(0, 1)] = Complex64::new(1.0, 0.0);
        k[(1, 0)] = Complex64::new(1.0, 0.0);
        let family = UnitaryFamily::new(&Operator::new(k).unwrap(), (-FRAC_PI_2, FRAC_PI_2)).unwrap();
        let beta = crate::thermo::state_beta(&h, &rho).unwrap().value();
        assert!(matches!(
            accessible_sigma(&h, &family, &rho, &rho, 0.0, beta),
            Err(Error::OrbitMismatch { .. })
        ));
    }

    #[test]
    fn fidelity_bounds() {
        let a = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let b = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-14);
        let expected = (2.0 * (0.21f64).sqrt()).powi(2);
        assert!((fidelity(&a, &b).unwrap() - expected).abs() < 1e-14);
    }
}
