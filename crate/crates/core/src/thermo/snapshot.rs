use super::thermal::{EffectiveBeta, Spectrum};
use crate::error::{Error, Result};
use crate::quantum::{clipped, shannon, DensityMatrix, Operator};

/// Thermodynamic state functions of one subsystem at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalSnapshot {
    pub label: String,
    /// `Tr{H rho}`.
    pub energy: f64,
    pub entropy: f64,
    /// Entropy-matched inverse temperature.
    pub beta: EffectiveBeta,
    /// Mean energy of the entropy-matched Gibbs state.
    pub thermal_energy: f64,
    pub ergotropy: f64,
    /// `energy - thermal_energy`.
    pub gen_ergotropy: f64,
    /// Energy-matched inverse temperature; `None` when the energy sits on a spectral edge.
    pub energy_beta: Option<f64>,
}

/// Heat provided and work performed by a subsystem between two snapshots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatWork {
    pub heat: f64,
    pub work: f64,
}

/// Optimal inverse temperature and minimal work of the preparation functional.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreparationOptimum {
    pub beta_opt: EffectiveBeta,
    pub w_min: f64,
}

pub(crate) fn snapshot_with(spectrum: &Spectrum, h: &Operator, rho: &DensityMatrix, label: &str) -> Result<ThermalSnapshot> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: rho.dim() });
    }
    let energy = h.expectation(rho);
    let eigenvalues = clipped(&rho.eigenvalues())?;
    let entropy = shannon(&eigenvalues);
    let beta = spectrum.effective_beta(entropy)?;
    let thermal_energy = spectrum.mean_energy(beta.value());
    let passive_energy: f64 = eigenvalues.iter().rev().zip(spectrum.energies()).map(|(p, e)| p * e).sum();
    Ok(ThermalSnapshot {
        label: label.to_string(),
        energy,
        entropy,
        beta,
        thermal_energy,
        ergotropy: energy - passive_energy,
        gen_ergotropy: energy - thermal_energy,
        energy_beta: spectrum.energy_beta(energy).ok(),
    })
}

/// Energy, entropy, effective temperature, thermal energy and ergotropies of `rho`.
pub fn thermal_snapshot(h: &Operator, rho: &DensityMatrix, label: &str) -> Result<ThermalSnapshot> {
    snapshot_with(&Spectrum::of(h)?, h, rho, label)
}

/// Maximal energy extractable by a single unitary (sorted-spectrum formula).
pub fn ergotropy(h: &Operator, rho: &DensityMatrix) -> Result<f64> {
    Ok(thermal_snapshot(h, rho, "")?.ergotropy)
}

/// `Q = -Delta E_th` and `W = -Delta E - Q` from `snap0` to `snap_t`.
pub fn heat_work(snap0: &ThermalSnapshot, snap_t: &ThermalSnapshot) -> Result<HeatWork> {
    if snap0.label != snap_t.label {
        return Err(Error::LabelMismatch(snap0.label.clone(), snap_t.label.clone()));
    }
    let heat = snap0.thermal_energy - snap_t.thermal_energy;
    let work = (snap0.energy - snap_t.energy) - heat;
    Ok(HeatWork { heat, work })
}

/// Nonequilibrium free energy `E - S / beta_ref`.
pub fn free_energy(snap: &ThermalSnapshot, beta_ref: f64) -> Result<f64> {
    if !(beta_ref > 0.0) {
        return Err(Error::InvalidArgument(format!("reference inverse temperature must be positive, got {beta_ref}")));
    }
    Ok(snap.energy - snap.entropy / beta_ref)
}

/// Work `D(rho || w[beta]) / beta` spent preparing `rho` from the Gibbs state at `beta`.
pub fn preparation_cost(h: &Operator, rho: &DensityMatrix, beta: f64) -> Result<f64> {
    if !(beta > 0.0) || beta.is_infinite() {
        return Err(Error::InvalidArgument(format!("preparation inverse temperature must be finite and positive, got {beta}")));
    }
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: rho.dim() });
    }
    // D(rho || w) = -S(rho) - sum_k <k|rho|k> ln w_k in the eigenbasis of H; stays finite
    // where the Gibbs weights underflow the support threshold of a matrix logarithm.
    let spectrum = Spectrum::of(h)?;
    let populations = spectrum.eig.populations(rho.matrix());
    let cross: f64 = populations.iter().zip(spectrum.log_weights(beta)).map(|(p, lw)| -p * lw).sum();
    let entropy = shannon(&clipped(&rho.eigenvalues())?);
    Ok((cross - entropy).max(0.0) / beta)
}

/// Minimum of [`preparation_cost`] over `beta`, attained at the effective temperature.
/// An infinite optimum stands for the `beta -> inf` limit, whose cost is `E - E_ground`.
pub fn minimize_preparation_cost(h: &Operator, rho: &DensityMatrix) -> Result<PreparationOptimum> {
    let spectrum = Spectrum::of(h)?;
    let snap = snapshot_with(&spectrum, h, rho, "")?;
    let w_min = if snap.beta.is_infinite() || snap.beta.value() == 0.0 {
        snap.gen_ergotropy
    } else {
        preparation_cost(h, rho, snap.beta.value())?
    };
    Ok(PreparationOptimum { beta_opt: snap.beta, w_min })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::thermal_state;

    fn qubit(omega: f64) -> Operator {
        Operator::diagonal(&[-omega / 2.0, omega / 2.0])
    }

    #[test]
    fn thermal_state_is_completely_passive() {
        let h = Operator::diagonal(&[0.0, 0.7, 1.9]);
        let w = thermal_state(&h, 0.8).unwrap();
        let s = thermal_snapshot(&h, &w, "B").unwrap();
        assert!(s.ergotropy.abs() < 1e-12);
        assert!(s.gen_ergotropy.abs() < 1e-12);
        assert!((s.beta.value() - 0.8).abs() < 1e-8);
        assert!((s.energy_beta.unwrap() - 0.8).abs() < 1e-8);
    }

    #[test]
    fn excited_qubit() {
        let omega = 1.4;
        let rho = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        let s = thermal_snapshot(&qubit(omega), &rho, "B").unwrap();
        assert!((s.ergotropy - omega).abs() < 1e-14);
        assert!((s.gen_ergotropy - omega).abs() < 1e-14);
        assert!(s.beta.is_infinite());
        assert_eq!(s.energy_beta, None);
    }

    #[test]
    fn heat_work_of_identical_snapshots_vanish() {
        let h = qubit(1.0);
        let s = thermal_snapshot(&h, &DensityMatrix::diagonal(&[0.8, 0.2]).unwrap(), "B").unwrap();
        assert_eq!(heat_work(&s, &s).unwrap(), HeatWork { heat: 0.0, work: 0.0 });
        let mut other = s.clone();
        other.label = "A".into();
        assert!(matches!(heat_work(&s, &other), Err(Error::LabelMismatch(..))));
    }

    #[test]
    fn free_energy_cases() {
        let h = Operator::diagonal(&[0.0, 1.0, 1.5]);
        let pure = DensityMatrix::diagonal(&[0.0, 1.0, 0.0]).unwrap();
        let s = thermal_snapshot(&h, &pure, "A").unwrap();
        assert!((free_energy(&s, 2.0).unwrap() - 1.0).abs() < 1e-14);
        let beta = 1.3;
        let w = thermal_state(&h, beta).unwrap();
        let s = thermal_snapshot(&h, &w, "A").unwrap();
        let z: f64 = [0.0f64, 1.0, 1.5].iter().map(|e| (-beta * e).exp()).sum();
        assert!((free_energy(&s, beta).unwrap() + z.ln() / beta).abs() < 1e-13);
        assert!(free_energy(&s, 0.0).is_err());
    }

    #[test]
    fn preparation_cost_of_gibbs_state_vanishes() {
        let h = Operator::diagonal(&[0.0, 1.0, 1.5]);
        let w = thermal_state(&h, 0.6).unwrap();
        assert!(preparation_cost(&h, &w, 0.6).unwrap().abs() < 1e-13);
        assert!(preparation_cost(&h, &w, -1.0).is_err());
    }

    #[test]
    fn preparation_cost_matches_matrix_relative_entropy() {
        let h = Operator::diagonal(&[0.0, 0.4, 1.1]);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(4);
        let rho = crate::quantum::random_state(3, 3, &mut rng);
        let beta = 1.7;
        let direct = crate::quantum::relative_entropy(&rho, &thermal_state(&h, beta).unwrap()).unwrap() / beta;
        assert!((preparation_cost(&h, &rho, beta).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn preparation_cost_finite_when_gibbs_weights_underflow() {
        let h = Operator::diagonal(&[0.0, 0.007, 0.008, 1.47]);
        let rho = DensityMatrix::diagonal(&[0.7, 0.2, 0.05, 0.05]).unwrap();
        let opt = minimize_preparation_cost(&h, &rho).unwrap();
        let snap = thermal_snapshot(&h, &rho, "A").unwrap();
        assert!(opt.beta_opt.value() > 100.0);
        assert!((opt.w_min - snap.gen_ergotropy).abs() < 1e-12);
    }

    #[test]
    fn excited_qubit_preparation_limit() {
        let omega = 0.9;
        let h = qubit(omega);
        let rho = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        let opt = minimize_preparation_cost(&h, &rho).unwrap();
        assert!(opt.beta_opt.is_infinite());
        assert!((opt.w_min - omega).abs() < 1e-14);
        let large = preparation_cost(&h, &rho, 20.0).unwrap();
        assert!(large > omega && large - omega < 1e-6);
    }
}
