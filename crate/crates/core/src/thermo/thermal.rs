use crate::error::{Error, Result};
use crate::quantum::{c, shannon, vn_entropy, DensityMatrix, Eigh, Operator};

/// Upper end of the inverse-temperature bracket, in units of the spectral spread.
pub const BETA_CAP_SCALE: f64 = 1e6;
/// Tolerance on entropy comparisons against `log d`.
pub const ENTROPY_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 400;

/// Entropy-matched inverse temperature; `+inf` stands for the ground-space limit.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct EffectiveBeta(f64);

impl EffectiveBeta {
    pub const INFINITE: EffectiveBeta = EffectiveBeta(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidArgument(format!("effective beta must be nonnegative, got {value}")));
        }
        Ok(EffectiveBeta(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

/// Sorted energies of a Hermitian Hamiltonian with its eigenbasis.
#[derive(Clone, Debug)]
pub(crate) struct Spectrum {
    pub(crate) eig: Eigh,
}

impl Spectrum {
    pub(crate) fn of(h: &Operator) -> Result<Self> {
        Ok(Spectrum { eig: h.eigh()? })
    }

    pub(crate) fn energies(&self) -> &[f64] {
        &self.eig.values
    }

    pub(crate) fn spread(&self) -> f64 {
        self.eig.values[self.eig.values.len() - 1] - self.eig.values[0]
    }

    fn degeneracy_tol(&self) -> f64 {
        1e-12 * self.eig.values.iter().fold(1.0f64, |m, e| m.max(e.abs()))
    }

    pub(crate) fn is_flat(&self) -> bool {
        self.spread() <= self.degeneracy_tol()
    }

    /// Normalized Gibbs weights; `beta` may be any real or `+inf`.
    pub(crate) fn weights(&self, beta: f64) -> Vec<f64> {
        let e = self.energies();
        if beta.is_infinite() {
            let tol = self.degeneracy_tol();
            let target = if beta > 0.0 { e[0] } else { e[e.len() - 1] };
            let mask: Vec<f64> = e.iter().map(|&x| if (x - target).abs() <= tol { 1.0 } else { 0.0 }).collect();
            let n: f64 = mask.iter().sum();
            return mask.iter().map(|m| m / n).collect();
        }
        // Largest exponent factored out so the sum never overflows.
        let exps: Vec<f64> = e.iter().map(|&x| -beta * x).collect();
        let top = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = exps.iter().map(|x| (x - top).exp()).collect();
        let z: f64 = raw.iter().sum();
        raw.iter().map(|r| r / z).collect()
    }

    pub(crate) fn mean_energy(&self, beta: f64) -> f64 {
        self.weights(beta).iter().zip(self.energies()).map(|(p, e)| p * e).sum()
    }

    pub(crate) fn entropy(&self, beta: f64) -> f64 {
        shannon(&self.weights(beta))
    }

    pub(crate) fn state(&self, beta: f64) -> DensityMatrix {
        let w = self.weights(beta);
        let mut k = 0;
        let m = self.eig.map(|_| {
            let v = w[k];
            k += 1;
            c(v)
        });
        DensityMatrix::from_trusted(m)
    }

    /// `ln p_k` for the Gibbs weights at finite `beta`, without underflow.
    pub(crate) fn log_weights(&self, beta: f64) -> Vec<f64> {
        let exps: Vec<f64> = self.energies().iter().map(|&x| -beta * x).collect();
        let top = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let log_z = top + exps.iter().map(|x| (x - top).exp()).sum::<f64>().ln();
        exps.iter().map(|x| x - log_z).collect()
    }

    pub(crate) fn beta_cap(&self) -> f64 {
        BETA_CAP_SCALE / self.spread()
    }

    pub(crate) fn effective_beta(&self, target: f64) -> Result<EffectiveBeta> {
        let d = self.energies().len();
        let max = (d as f64).ln();
        if target > max + ENTROPY_TOL || target.is_nan() {
            return Err(Error::EntropyOutOfRange { target, max });
        }
        if target >= max {
            return Ok(EffectiveBeta(0.0));
        }
        if self.is_flat() {
            if target >= max - ENTROPY_TOL {
                return Ok(EffectiveBeta(0.0));
            }
            return Err(Error::UndefinedTemperature { entropy: target });
        }
        let mut hi = self.beta_cap();
        if target <= self.entropy(hi) {
            return Ok(EffectiveBeta::INFINITE);
        }
        let mut lo = 0.0;
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.entropy(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(EffectiveBeta(0.5 * (lo + hi)))
    }

    pub(crate) fn energy_beta(&self, target: f64) -> Result<f64> {
        let e = self.energies();
        let (min, max) = (e[0], e[e.len() - 1]);
        if !(target > min && target < max) {
            return Err(Error::EnergyOutOfRange { target, min, max });
        }
        let cap = self.beta_cap();
        let (mut lo, mut hi) = (-cap, cap);
        if target <= self.mean_energy(cap) {
            return Ok(cap);
        }
        if target >= self.mean_energy(-cap) {
            return Ok(-cap);
        }
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            // Mean energy decreases with beta.
            if self.mean_energy(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Gibbs state `exp(-beta H) / Z`; `beta = +inf` gives the normalized ground projector.
pub fn thermal_state(h: &Operator, beta: f64) -> Result<DensityMatrix> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidArgument(format!("inverse temperature must be nonnegative, got {beta}")));
    }
    Ok(Spectrum::of(h)?.state(beta))
}

/// Mean energy of `thermal_state(h, beta)`.
pub fn thermal_energy(h: &Operator, beta: EffectiveBeta) -> Result<f64> {
    Ok(Spectrum::of(h)?.mean_energy(beta.value()))
}

/// Unique `beta >= 0` whose Gibbs state has entropy `target`.
pub fn effective_beta(h: &Operator, target: f64) -> Result<EffectiveBeta> {
    Spectrum::of(h)?.effective_beta(target)
}

/// Effective inverse temperature of a state: `effective_beta(h, S[rho])`.
pub fn state_beta(h: &Operator, rho: &DensityMatrix) -> Result<EffectiveBeta> {
    effective_beta(h, vn_entropy(rho)?)
}

/// Unique real `beta*` whose Gibbs state has mean energy `target`.
pub fn energy_beta(h: &Operator, target: f64) -> Result<f64> {
    Spectrum::of(h)?.energy_beta(target)
}

/// `beta * x`, reading `inf * 0` as 0 (the ground-space limit of a vanishing exchange).
pub fn beta_times(beta: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        beta * x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::max_abs;

    fn qubit(omega: f64) -> Operator {
        Operator::diagonal(&[-omega / 2.0, omega / 2.0])
    }

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let h = Operator::diagonal(&[0.0, 1.0, 2.5]);
        let w = thermal_state(&h, 0.0).unwrap();
        assert!(max_abs(&(w.matrix() - DensityMatrix::maximally_mixed(3).matrix())) < 1e-15);
    }

    #[test]
    fn qubit_gibbs_weights() {
        let omega = 1.7;
        let w = thermal_state(&qubit(omega), 2.0 / omega).unwrap();
        let e = std::f64::consts::E;
        let z = e + 1.0 / e;
        assert!((w.matrix()[(0, 0)].re - e / z).abs() < 1e-15);
        assert!((w.matrix()[(1, 1)].re - 1.0 / (e * z)).abs() < 1e-15);
    }

    #[test]
    fn zero_temperature_projects_on_ground() {
        let w = thermal_state(&Operator::diagonal(&[0.3, -1.0, 2.0]), f64::INFINITY).unwrap();
        assert!((w.matrix()[(1, 1)].re - 1.0).abs() < 1e-15);
        assert!((w.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn huge_beta_does_not_overflow() {
        let w = thermal_state(&Operator::diagonal(&[-800.0, 0.0, 900.0]), 5.0).unwrap();
        assert!((w.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn qubit_entropy_closed_form() {
        let w = thermal_state(&qubit(1.0), 2.0).unwrap();
        let x = (-2.0f64).exp();
        let expected = (1.0 + x).ln() + 2.0 * x / (1.0 + x);
        let s = vn_entropy(&w).unwrap();
        assert!((s - expected).abs() < 1e-14);
        assert!((s - 0.36533).abs() < 1e-5);
    }

    #[test]
    fn effective_beta_edges() {
        let h = qubit(1.0);
        assert_eq!(effective_beta(&h, 2f64.ln()).unwrap().value(), 0.0);
        assert!(effective_beta(&h, 0.0).unwrap().is_infinite());
        assert!(matches!(effective_beta(&h, 1.0), Err(Error::EntropyOutOfRange { .. })));
        let flat = Operator::identity(3);
        assert_eq!(effective_beta(&flat, 3f64.ln()).unwrap().value(), 0.0);
        assert!(matches!(effective_beta(&flat, 0.5), Err(Error::UndefinedTemperature { .. })));
    }

    #[test]
    fn effective_beta_round_trip() {
        let h = Operator::diagonal(&[0.0, 0.4, 1.1, 3.0]);
        for beta in [0.01, 0.1, 1.0, 10.0] {
            let s = vn_entropy(&thermal_state(&h, beta).unwrap()).unwrap();
            let back = effective_beta(&h, s).unwrap().value();
            assert!((back - beta).abs() <= 1e-8 * beta, "{beta} -> {back}");
        }
    }

    #[test]
    fn energy_beta_cases() {
        let omega = 1.3;
        let h = qubit(omega);
        assert!(energy_beta(&h, 0.0).unwrap().abs() < 1e-12);
        let e = -(omega / 2.0) * 1f64.tanh();
        assert!((energy_beta(&h, e).unwrap() - 2.0 / omega).abs() < 1e-8);
        assert!((energy_beta(&h, -e).unwrap() + 2.0 / omega).abs() < 1e-8);
        assert!(matches!(energy_beta(&h, omega), Err(Error::EnergyOutOfRange { .. })));
    }
}
