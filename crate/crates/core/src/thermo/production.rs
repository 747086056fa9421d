use super::snapshot::ThermalSnapshot;
use super::thermal::{beta_times, EffectiveBeta, Spectrum};
use crate::error::{Error, Result};
use crate::quantum::Operator;

/// Below this magnitude a thermal-energy change is treated as zero.
pub const DEGENERATE_THERMAL_CHANGE: f64 = 1e-12;

/// Sampled effective temperature and thermal energy of one subsystem from `t = 0`
/// up to the current time.
#[derive(Clone, Copy, Debug)]
pub struct TemperaturePath<'a> {
    pub beta: &'a [f64],
    pub thermal_energy: &'a [f64],
}

/// Entropy-production terms of one time sample, all relative to `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyProduction {
    /// `Delta S_j - sum_{i != j} beta_i(0) Q_i`, one per subsystem.
    pub sigma: Vec<f64>,
    /// `-sum_j beta_j(0) Q_j`.
    pub clausius_sum: f64,
    pub i_tot: f64,
    /// `clausius_sum - Delta I_tot`, nonnegative also for correlated initial states.
    pub corr_adjusted_lhs: f64,
    /// `Delta S_j - sum_{i != j} int beta_i dQ_i`, present when paths are supplied.
    pub tighter_sigma: Option<Vec<f64>>,
    /// `-sum_j int beta_j dQ_j`, present when paths are supplied.
    pub tighter_clausius: Option<f64>,
}

/// `int beta dE_th` along a sampled path by the trapezoidal rule.
pub fn path_integral(path: TemperaturePath<'_>) -> Result<f64> {
    if path.beta.len() != path.thermal_energy.len() {
        return Err(Error::DimensionMismatch { expected: path.beta.len(), found: path.thermal_energy.len() });
    }
    let mut total = 0.0;
    for k in 1..path.beta.len() {
        let de = path.thermal_energy[k] - path.thermal_energy[k - 1];
        total += beta_times(0.5 * (path.beta[k] + path.beta[k - 1]), de);
    }
    Ok(total)
}

/// Path-averaged inverse temperature `int beta dE_th / Delta E_th`.
pub fn average_beta(beta_series: &[f64], eth_series: &[f64]) -> Result<f64> {
    let n = eth_series.len();
    if n < 2 {
        return Err(Error::InvalidArgument("average temperature needs at least two samples".into()));
    }
    let delta = eth_series[n - 1] - eth_series[0];
    if delta.abs() <= DEGENERATE_THERMAL_CHANGE {
        return Err(Error::DegenerateThermalChange(delta));
    }
    Ok(path_integral(TemperaturePath { beta: beta_series, thermal_energy: eth_series })? / delta)
}

/// Assembles the entropy-production variants for one sample.
pub fn entropy_production(
    snaps0: &[ThermalSnapshot],
    snaps_t: &[ThermalSnapshot],
    i_tot0: f64,
    i_tot: f64,
    paths: Option<&[TemperaturePath<'_>]>,
) -> Result<EntropyProduction> {
    if snaps0.len() != snaps_t.len() {
        return Err(Error::DimensionMismatch { expected: snaps0.len(), found: snaps_t.len() });
    }
    for (a, b) in snaps0.iter().zip(snaps_t) {
        if a.label != b.label {
            return Err(Error::LabelMismatch(a.label.clone(), b.label.clone()));
        }
    }
    let n = snaps0.len();
    let weighted: Vec<f64> = snaps0
        .iter()
        .zip(snaps_t)
        .map(|(s0, st)| beta_times(s0.beta.value(), s0.thermal_energy - st.thermal_energy))
        .collect();
    let ds: Vec<f64> = snaps0.iter().zip(snaps_t).map(|(s0, st)| st.entropy - s0.entropy).collect();
    let total: f64 = weighted.iter().sum();
    let sigma = (0..n).map(|j| ds[j] - (total - weighted[j])).collect();
    let clausius_sum = -total;

    let (tighter_sigma, tighter_clausius) = match paths {
        None => (None, None),
        Some(paths) => {
            if paths.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: paths.len() });
            }
            // int beta dQ = -int beta dE_th
            let flows: Vec<f64> = paths.iter().map(|p| path_integral(*p).map(|v| -v)).collect::<Result<_>>()?;
            let flow_total: f64 = flows.iter().sum();
            let tight = (0..n).map(|j| ds[j] - (flow_total - flows[j])).collect();
            (Some(tight), Some(-flow_total))
        }
    };
    Ok(EntropyProduction {
        sigma,
        clausius_sum,
        i_tot,
        corr_adjusted_lhs: clausius_sum - (i_tot - i_tot0),
        tighter_sigma,
        tighter_clausius,
    })
}

/// Ergotropy-based pseudo entropy production `Delta S_A + beta_B(0) (Delta E_B - Delta Erg_B)`.
/// Sign-indefinite; kept as a diagnostic only.
pub fn sigma_erg(a0: &ThermalSnapshot, a_t: &ThermalSnapshot, b0: &ThermalSnapshot, b_t: &ThermalSnapshot) -> f64 {
    let d_e = b_t.energy - b0.energy;
    let d_erg = b_t.ergotropy - b0.ergotropy;
    (a_t.entropy - a0.entropy) + beta_times(b0.beta.value(), d_e - d_erg)
}

/// `D(w[beta_t] || w[beta_0])` between two Gibbs states of the same Hamiltonian.
pub fn thermal_distance(h: &Operator, beta_t: EffectiveBeta, beta_0: EffectiveBeta) -> Result<f64> {
    Ok(thermal_distance_with(&Spectrum::of(h)?, beta_t, beta_0))
}

pub(crate) fn thermal_distance_with(spectrum: &Spectrum, beta_t: EffectiveBeta, beta_0: EffectiveBeta) -> f64 {
    let p = spectrum.weights(beta_t.value());
    if beta_0.is_infinite() {
        let q = spectrum.weights(f64::INFINITY);
        let leaks = p.iter().zip(&q).any(|(pi, qi)| *pi > 0.0 && *qi == 0.0);
        return if leaks { f64::INFINITY } else { 0.0 };
    }
    let log_q = spectrum.log_weights(beta_0.value());
    let log_p = (!beta_t.is_infinite()).then(|| spectrum.log_weights(beta_t.value()));
    p.iter()
        .enumerate()
        .filter(|(_, &pi)| pi > 0.0)
        .map(|(k, &pi)| {
            let lp = log_p.as_ref().map_or(pi.ln(), |l| l[k]);
            pi * (lp - log_q[k])
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{relative_entropy, DensityMatrix};
    use crate::thermo::{thermal_snapshot, thermal_state};

    #[test]
    fn constant_beta_average() {
        let beta = [0.7; 5];
        let eth = [0.0, 0.1, 0.3, 0.2, 0.5];
        assert!((average_beta(&beta, &eth).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn linear_path_average() {
        let n = 101;
        let u: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
        let beta: Vec<f64> = u.iter().map(|x| 1.0 + x).collect();
        assert!((average_beta(&beta, &u).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn degenerate_average_is_an_error() {
        assert!(matches!(average_beta(&[1.0, 2.0], &[0.3, 0.3]), Err(Error::DegenerateThermalChange(_))));
    }

    #[test]
    fn thermal_distance_matches_matrix_relative_entropy() {
        let h = Operator::diagonal(&[0.0, 0.6, 1.7]);
        let (b1, b0) = (1.9, 0.4);
        let d = thermal_distance(&h, EffectiveBeta::new(b1).unwrap(), EffectiveBeta::new(b0).unwrap()).unwrap();
        let direct = relative_entropy(&thermal_state(&h, b1).unwrap(), &thermal_state(&h, b0).unwrap()).unwrap();
        assert!((d - direct).abs() < 1e-14);
        let to_ground = thermal_distance(&h, EffectiveBeta::INFINITE, EffectiveBeta::new(b0).unwrap()).unwrap();
        assert!((to_ground + thermal_state(&h, b0).unwrap().matrix()[(0, 0)].re.ln()).abs() < 1e-14);
    }

    #[test]
    fn initial_sample_has_no_production() {
        let h = Operator::diagonal(&[-0.5, 0.5]);
        let a = thermal_snapshot(&h, &DensityMatrix::diagonal(&[0.9, 0.1]).unwrap(), "A").unwrap();
        let b = thermal_snapshot(&h, &DensityMatrix::diagonal(&[0.6, 0.4]).unwrap(), "B").unwrap();
        let snaps = vec![a, b];
        let ep = entropy_production(&snaps, &snaps, 0.0, 0.0, None).unwrap();
        assert_eq!(ep.sigma, vec![0.0, 0.0]);
        assert_eq!(ep.clausius_sum, 0.0);
        assert_eq!(sigma_erg(&snaps[0], &snaps[0], &snaps[1], &snaps[1]), 0.0);
    }
}
