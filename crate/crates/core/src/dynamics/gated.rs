use std::f64::consts::PI;

use num_complex::Complex64;

use super::system::{CompositeSystem, TimeGrid};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::quantum::Eigh;

/// Default bound on the gate change across one time step.
pub const DEFAULT_MAX_GATE_STEP: f64 = 0.05;

/// Profile `G(q)` of a gated coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateShape {
    /// Coupling never switched on.
    Zero,
    /// Linear rise on `[on, on + ramp]`, plateau at 1, linear fall on `[off - ramp, off]`.
    Trapezoid { on: f64, off: f64, ramp: f64 },
    /// Same support as [`GateShape::Trapezoid`] with raised-cosine ramps.
    SmoothTrapezoid { on: f64, off: f64, ramp: f64 },
}

impl GateShape {
    pub fn eval(&self, q: f64) -> f64 {
        let (on, off, ramp, smooth) = match *self {
            GateShape::Zero => return 0.0,
            GateShape::Trapezoid { on, off, ramp } => (on, off, ramp, false),
            GateShape::SmoothTrapezoid { on, off, ramp } => (on, off, ramp, true),
        };
        let profile = |x: f64| if smooth { 0.5 * (1.0 - (PI * x).cos()) } else { x };
        if q <= on || q >= off {
            0.0
        } else if q < on + ramp {
            profile((q - on) / ramp)
        } else if q > off - ramp {
            profile((off - q) / ramp)
        } else {
            1.0
        }
    }

    /// Plateau interval `[on + ramp, off - ramp]` in `q`, if any.
    pub fn plateau(&self) -> Option<(f64, f64)> {
        match *self {
            GateShape::Zero => None,
            GateShape::Trapezoid { on, off, ramp } | GateShape::SmoothTrapezoid { on, off, ramp } => {
                Some((on + ramp, off - ramp))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GateShape::Zero => Ok(()),
            GateShape::Trapezoid { on, off, ramp } | GateShape::SmoothTrapezoid { on, off, ramp } => {
                if !(ramp > 0.0) || !(off - on >= 2.0 * ramp) || !on.is_finite() || !off.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "gate needs ramp > 0 and off - on >= 2 ramp (on = {on}, off = {off}, ramp = {ramp})"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Clock-driven gate `G(q0 + v t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateSchedule {
    pub shape: GateShape,
    pub q0: f64,
    pub v: f64,
}

impl GateSchedule {
    pub fn new(shape: GateShape, q0: f64, v: f64) -> Result<Self> {
        shape.validate()?;
        if !v.is_finite() || !q0.is_finite() {
            return Err(Error::InvalidArgument("clock position and speed must be finite".into()));
        }
        if shape.eval(q0) != 0.0 {
            return Err(Error::InvalidArgument(format!("gate must vanish at q0 = {q0}")));
        }
        Ok(GateSchedule { shape, q0, v })
    }

    pub fn at(&self, t: f64) -> f64 {
        self.shape.eval(self.q0 + self.v * t)
    }

    /// Plateau `[t1, t2]` in time, for positive speed.
    pub fn plateau_times(&self) -> Option<(f64, f64)> {
        let (a, b) = self.shape.plateau()?;
        (self.v > 0.0).then(|| ((a - self.q0) / self.v, (b - self.q0) / self.v))
    }

    /// Duration of one ramp in time, for positive speed.
    pub fn ramp_time(&self) -> Option<f64> {
        match self.shape {
            GateShape::Zero => None,
            GateShape::Trapezoid { ramp, .. } | GateShape::SmoothTrapezoid { ramp, .. } => {
                (self.v > 0.0).then(|| ramp / self.v)
            }
        }
    }

    /// Grid with `coarse` equal steps on each gate-constant stretch of `[0, t_max]` and
    /// `fine` equal steps across each ramp.
    pub fn adapted_grid(&self, t_max: f64, coarse: usize, fine: usize) -> Result<TimeGrid> {
        let mut breaks = vec![0.0];
        if let (Some((t1, t2)), Some(tau)) = (self.plateau_times(), self.ramp_time()) {
            for b in [t1 - tau, t1, t2, t2 + tau] {
                if b > breaks[breaks.len() - 1] && b < t_max {
                    breaks.push(b);
                }
            }
        }
        breaks.push(t_max);
        let mut times = vec![0.0];
        for w in breaks.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let n = if self.at(mid) > 0.0 && self.at(mid) < 1.0 { fine } else { coarse }.max(1);
            for k in 1..=n {
                times.push(w[0] + (w[1] - w[0]) * k as f64 / n as f64);
            }
        }
        TimeGrid::new(times)
    }
}

/// Midpoint-exponential propagation under `sum_i H_i + G(q0 + v t) V`, with the
/// default per-step gate bound.
pub fn simulate_gated(system: &CompositeSystem, schedule: &GateSchedule, grid: &TimeGrid) -> Result<Trajectory> {
    simulate_gated_with(system, schedule, grid, DEFAULT_MAX_GATE_STEP)
}

/// As [`simulate_gated`] with an explicit bound on `|G(t_{k+1}) - G(t_k)|`.
///
/// The work delivered by the gate, `int Tr{dH/dt rho}`, is accumulated with the
/// trapezoidal rule `sum_k (G_{k+1} - G_k) (<V>_k + <V>_{k+1}) / 2`.
pub fn simulate_gated_with(
    system: &CompositeSystem,
    schedule: &GateSchedule,
    grid: &TimeGrid,
    max_gate_step: f64,
) -> Result<Trajectory> {
    let times = grid.times();
    let gates: Vec<f64> = times.iter().map(|&t| schedule.at(t)).collect();
    for k in 0..times.len() - 1 {
        let delta = (gates[k + 1] - gates[k]).abs();
        if delta > max_gate_step {
            return Err(Error::StepTooCoarse { t: times[k], delta, limit: max_gate_step });
        }
    }
    let h0 = system.free_hamiltonian()?;
    let v = system.coupling();
    let mut cache: Option<(u64, Eigh)> = None;
    let mut states = Vec::with_capacity(times.len());
    let mut rho = system.initial_state().clone();
    let mut v_prev = v.expectation(&rho);
    let mut w_c = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    states.push(rho.clone());
    w_c.push(0.0);
    for k in 0..times.len() - 1 {
        let dt = times[k + 1] - times[k];
        let g_mid = schedule.at(times[k] + 0.5 * dt);
        let key = g_mid.to_bits();
        if cache.as_ref().map(|(k0, _)| *k0) != Some(key) {
            let h = &h0 + &v.scale(g_mid);
            cache = Some((key, h.eigh()?));
        }
        let eig = &cache.as_ref().expect("cache filled").1;
        let u = eig.map(|e| Complex64::from_polar(1.0, -e * dt));
        rho = rho.conjugate_by(&u);
        let v_next = v.expectation(&rho);
        acc += (gates[k + 1] - gates[k]) * 0.5 * (v_prev + v_next);
        v_prev = v_next;
        states.push(rho.clone());
        w_c.push(acc);
    }
    Ok(Trajectory::from_states(system, times.to_vec(), states, Some(gates))?.with_work_series(w_c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_profiles() {
        let lin = GateShape::Trapezoid { on: 1.0, off: 5.0, ramp: 1.0 };
        assert_eq!(lin.eval(0.5), 0.0);
        assert_eq!(lin.eval(1.5), 0.5);
        assert_eq!(lin.eval(3.0), 1.0);
        assert_eq!(lin.eval(4.75), 0.25);
        assert_eq!(lin.eval(6.0), 0.0);
        let smooth = GateShape::SmoothTrapezoid { on: 1.0, off: 5.0, ramp: 1.0 };
        assert!((smooth.eval(1.5) - 0.5).abs() < 1e-15);
        assert!((smooth.eval(1.25) - 0.5 * (1.0 - (PI / 4.0).cos())).abs() < 1e-15);
    }

    #[test]
    fn schedule_validation() {
        let shape = GateShape::Trapezoid { on: 1.0, off: 5.0, ramp: 1.0 };
        assert!(GateSchedule::new(shape, 3.0, 1.0).is_err());
        assert!(GateSchedule::new(GateShape::Trapezoid { on: 1.0, off: 2.0, ramp: 1.0 }, 0.0, 1.0).is_err());
        let s = GateSchedule::new(shape, 0.0, 2.0).unwrap();
        assert_eq!(s.plateau_times(), Some((1.0, 2.0)));
        assert_eq!(s.ramp_time(), Some(0.5));
    }

    #[test]
    fn adapted_grid_refines_ramps() {
        let s = GateSchedule::new(GateShape::Trapezoid { on: 1.0, off: 5.0, ramp: 0.5 }, 0.0, 1.0).unwrap();
        let g = s.adapted_grid(6.0, 10, 40).unwrap();
        assert_eq!(g.len(), 1 + 10 + 40 + 10 + 40 + 10);
        assert_eq!(g.end(), 6.0);
    }
}
