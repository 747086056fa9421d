use super::layout::{marginals, product_state, SubsystemLayout};
use super::operator::{DensityMatrix, EIGEN_CLIP_TOL};
use crate::error::{Error, Result};

/// Eigenvalues below this are outside the support when taking logarithms.
pub const SUPPORT_TOL: f64 = 1e-14;
/// Weight of `rho` outside the support of `sigma` above which `D(rho||sigma)` is infinite.
pub const LEAKAGE_TOL: f64 = 1e-12;

/// `-sum p log p` with `0 log 0 = 0`.
pub fn shannon(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

pub(crate) fn clipped(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|&v| {
            if v < -EIGEN_CLIP_TOL {
                Err(Error::InvalidState(format!("negative eigenvalue {v:.3e}")))
            } else {
                Ok(v.clamp(0.0, 1.0))
            }
        })
        .collect()
}

/// Von Neumann entropy in nats.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(shannon(&clipped(&rho.eigenvalues())?))
}

/// `D(rho||sigma) = Tr{rho (log rho - log sigma)}`, `+inf` when `rho` leaks out of
/// the support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let neg_entropy = -vn_entropy(rho)?;
    let eig = sigma.eigh();
    let weights = eig.populations(rho.matrix());
    let mut cross = 0.0;
    let mut leakage = 0.0;
    for (&s, &w) in eig.values.iter().zip(&weights) {
        if s > SUPPORT_TOL {
            cross += w * s.ln();
        } else {
            leakage += w;
        }
    }
    if leakage > LEAKAGE_TOL {
        return Ok(f64::INFINITY);
    }
    Ok(neg_entropy - cross)
}

/// Total correlation `D(rho || (x)_i rho_i)`; the mutual information for two slots.
pub fn correlation_info(rho: &DensityMatrix, layout: &SubsystemLayout) -> Result<f64> {
    let product = product_state(&marginals(rho, layout)?)?;
    relative_entropy(rho, &product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::LN_2;

    #[test]
    fn pure_and_mixed_entropies() {
        let pure = DensityMatrix::diagonal(&[0.0, 1.0, 0.0]).unwrap();
        assert!(vn_entropy(&pure).unwrap().abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(5);
        assert!((vn_entropy(&mixed).unwrap() - 5f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn relative_entropy_basics() {
        let rho = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-14);
        let excited = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((relative_entropy(&excited, &mixed).unwrap() - LN_2).abs() < 1e-14);
        assert_eq!(relative_entropy(&mixed, &excited).unwrap(), f64::INFINITY);
    }

    #[test]
    fn bell_state_correlation() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = Complex64::new(0.0, 0.0);
        let bell = DensityMatrix::pure(&[Complex64::new(s, 0.0), zero, zero, Complex64::new(s, 0.0)]).unwrap();
        let layout = SubsystemLayout::pair(2, 2);
        assert!((correlation_info(&bell, &layout).unwrap() - 2.0 * LN_2).abs() < 1e-13);
        let product = DensityMatrix::diagonal(&[0.1, 0.9]).unwrap().kron(&DensityMatrix::diagonal(&[0.6, 0.4]).unwrap());
        assert!(correlation_info(&product, &layout).unwrap().abs() < 1e-14);
    }
}
