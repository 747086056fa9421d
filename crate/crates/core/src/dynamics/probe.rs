use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::thermo::{heat_work, Spectrum};

/// Correlation and trace-distance threshold used by the source classification.
pub const SOURCE_TOL: f64 = 1e-9;

/// How a subsystem behaved as a source over a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    /// Never correlated with the rest: unitary evolution, no heat.
    IdealWork,
    /// Thermal at every sample: no work.
    IdealHeat,
    /// Neither of the above.
    Hybrid,
}

/// Time series describing one subsystem as a source, all relative to `t = 0`.
#[derive(Clone, Debug, Default)]
pub struct SourceSeries {
    /// Correlation between the subsystem and the rest.
    pub correlation: Vec<f64>,
    pub entropy_change: Vec<f64>,
    pub heat: Vec<f64>,
    pub work: Vec<f64>,
    /// Trace distance of the marginal from its entropy-matched Gibbs state.
    pub distance_from_thermal: Vec<f64>,
}

/// Summary of [`ideal_source_probe`].
#[derive(Clone, Debug, PartialEq)]
pub struct SourceDiagnostic {
    pub label: String,
    pub max_correlation: f64,
    pub max_abs_entropy_change: f64,
    pub max_abs_heat: f64,
    pub max_abs_work: f64,
    pub max_distance_from_thermal: f64,
    pub kind: SourceKind,
    /// For an ideal work source, `|Q| <= tol`; for an ideal heat source, `|W| <= tol`.
    pub consistent: bool,
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Classifies a source series. The heat (work) tolerance for an ideal work (heat)
/// source is `tol` scaled by the largest energy exchange seen, floored at `tol`.
pub fn classify_source(label: &str, series: &SourceSeries, tol: f64) -> SourceDiagnostic {
    let max_correlation = max_abs(&series.correlation);
    let max_distance = max_abs(&series.distance_from_thermal);
    let max_heat = max_abs(&series.heat);
    let max_work = max_abs(&series.work);
    let derived = tol * (1.0 + max_heat.max(max_work));
    let (kind, consistent) = if max_correlation <= tol {
        (SourceKind::IdealWork, max_heat <= derived)
    } else if max_distance <= tol {
        (SourceKind::IdealHeat, max_work <= derived)
    } else {
        (SourceKind::Hybrid, true)
    };
    SourceDiagnostic {
        label: label.to_string(),
        max_correlation,
        max_abs_entropy_change: max_abs(&series.entropy_change),
        max_abs_heat: max_heat,
        max_abs_work: max_work,
        max_distance_from_thermal: max_distance,
        kind,
        consistent,
    }
}

/// Ideal-source diagnostic for one subsystem of a two-subsystem trajectory.
pub fn ideal_source_probe(traj: &Trajectory, label: &str) -> Result<SourceDiagnostic> {
    if traj.layout().len() != 2 {
        return Err(Error::InvalidArgument("ideal-source probe expects two subsystems".into()));
    }
    let j = traj.layout().index_of(label)?;
    let spectrum = Spectrum::of(&traj.local_hamiltonians()[j])?;
    let snaps = traj.series(label)?;
    let mut series = SourceSeries::default();
    for (k, snap) in snaps.iter().enumerate() {
        let hw = heat_work(snaps[0], snap)?;
        series.correlation.push(traj.i_tot()[k]);
        series.entropy_change.push(snap.entropy - snaps[0].entropy);
        series.heat.push(hw.heat);
        series.work.push(hw.work);
        let gibbs = spectrum.state(snap.beta.value());
        series.distance_from_thermal.push(traj.marginals()[k][j].trace_distance(&gibbs));
    }
    Ok(classify_source(label, &series, SOURCE_TOL))
}
