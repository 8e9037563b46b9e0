//! Fixed-step RK4 for the delay system with a cubic Hermite continuous
//! extension.
//!
//! The step is capped at a quarter of the smallest positive arc delay, so
//! every delayed argument of a stage lands in an already completed segment
//! or in the history. Zero-delay arcs read the stage state, which makes the
//! undelayed case exactly classical RK4.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{hermite_slope, hermite_value, rhs, DelayedPhases, DelayedState, HistorySpec, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub t_end: f64,
    pub dt: f64,
    /// Keep every `sample_stride`-th grid point in the output series.
    pub sample_stride: usize,
}

impl IntegrationConfig {
    pub fn new(t_end: f64, dt: f64) -> Self {
        Self {
            t_end,
            dt,
            sample_stride: 1,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.sample_stride = stride;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::invalid("t_end", format!("must be positive, got {}", self.t_end)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.sample_stride == 0 {
            return Err(Error::invalid("sample_stride", "must be at least 1"));
        }
        Ok(())
    }

    /// The step actually used: `min(dt, τ_min / 4, t_end)`, shrunk so that an
    /// integer number of steps lands on `t_end`.
    pub fn effective_step(&self, params: &SystemParams) -> Result<(f64, usize)> {
        self.validate()?;
        let cap = params.min_positive_active_delay().map_or(f64::INFINITY, |tau| tau / 4.0);
        let h = self.dt.min(cap).min(self.t_end);
        if !(h > 0.0) {
            return Err(Error::InvalidStep(h));
        }
        let steps = ((self.t_end / h) - 1e-9).ceil().max(1.0) as usize;
        Ok((self.t_end / steps as f64, steps))
    }
}

/// Dense-output solution of one run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    params: SystemParams,
    history: HistorySpec,
    step: f64,
    steps: usize,
    sample_stride: usize,
    phases: Vec<f64>,
    derivs: Vec<f64>,
}

impl Trajectory {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn history(&self) -> &HistorySpec {
        &self.history
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of grid points (steps + 1).
    pub fn grid_len(&self) -> usize {
        self.steps + 1
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.steps)
    }

    pub fn time(&self, m: usize) -> f64 {
        m as f64 * self.step
    }

    pub fn sample_stride(&self) -> usize {
        self.sample_stride
    }

    pub fn phases_at(&self, m: usize) -> &[f64] {
        let n = self.n();
        &self.phases[m * n..(m + 1) * n]
    }

    /// Stored right-hand side at grid point `m`.
    pub fn derivs_at(&self, m: usize) -> &[f64] {
        let n = self.n();
        &self.derivs[m * n..(m + 1) * n]
    }

    /// Grid indices kept after thinning.
    pub fn sample_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.grid_len()).step_by(self.sample_stride)
    }

    /// Grid indices whose times lie in `[a, b]`.
    pub fn grid_indices_in(&self, a: f64, b: f64) -> std::ops::RangeInclusive<usize> {
        let lo = (a / self.step).ceil().max(0.0) as usize;
        let hi = ((b / self.step).floor().max(0.0) as usize).min(self.steps);
        lo..=hi
    }

    fn segment(&self, t: f64) -> (usize, f64) {
        let m = ((t / self.step).floor().max(0.0) as usize).min(self.steps.saturating_sub(1));
        (m, (t - self.time(m)) / self.step)
    }

    fn check_range(&self, t: f64) -> Result<()> {
        let start = -self.params.tau_max();
        let end = self.t_end();
        if t.is_nan() || t < start || t > end {
            return Err(Error::OutOfRange { t, start, end });
        }
        Ok(())
    }

    /// Phase of oscillator `j` at any covered time.
    pub fn phase(&self, j: usize, t: f64) -> Result<f64> {
        self.check_range(t)?;
        if t <= 0.0 {
            return self.history.phase(j, t);
        }
        let n = self.n();
        let (m, u) = self.segment(t);
        Ok(hermite_value(
            self.phases[m * n + j],
            self.derivs[m * n + j],
            self.phases[(m + 1) * n + j],
            self.derivs[(m + 1) * n + j],
            self.step,
            u,
        ))
    }

    /// Frequency of oscillator `j`. At `t = 0` this is the left limit, i.e.
    /// the history derivative.
    pub fn frequency(&self, j: usize, t: f64) -> Result<f64> {
        self.check_range(t)?;
        if t <= 0.0 {
            return self.history.frequency(j, t);
        }
        let n = self.n();
        let (m, u) = self.segment(t);
        if u == 1.0 {
            return Ok(self.derivs[(m + 1) * n + j]);
        }
        if u == 0.0 {
            return Ok(self.derivs[m * n + j]);
        }
        Ok(hermite_slope(
            self.phases[m * n + j],
            self.derivs[m * n + j],
            self.phases[(m + 1) * n + j],
            self.derivs[(m + 1) * n + j],
            self.step,
            u,
        ))
    }

    /// All phases at time `t`.
    pub fn eval_dense(&self, t: f64) -> Result<Vec<f64>> {
        if t > 0.0 {
            self.check_range(t)?;
            let (m, u) = self.segment(t);
            if u == 0.0 {
                return Ok(self.phases_at(m).to_vec());
            }
            if u == 1.0 {
                return Ok(self.phases_at(m + 1).to_vec());
            }
        }
        (0..self.n()).map(|j| self.phase(j, t)).collect()
    }

    /// All frequencies at time `t`.
    pub fn eval_frequency(&self, t: f64) -> Result<Vec<f64>> {
        (0..self.n()).map(|j| self.frequency(j, t)).collect()
    }

    /// Frequencies used by the diagnostics at grid point `m`: the stored
    /// right-hand side (for `m = 0` this is the right limit).
    pub fn grid_frequencies(&self, m: usize) -> &[f64] {
        self.derivs_at(m)
    }
}

impl DelayedPhases for Trajectory {
    fn phase(&self, j: usize, t: f64) -> Result<f64> {
        Trajectory::phase(self, j, t)
    }
}

impl DelayedState for Trajectory {
    fn frequency(&self, j: usize, t: f64) -> Result<f64> {
        Trajectory::frequency(self, j, t)
    }
}

/// Read-only view of a trajectory under construction.
struct Partial<'a> {
    history: &'a HistorySpec,
    n: usize,
    step: f64,
    phases: &'a [f64],
    derivs: &'a [f64],
}

impl Partial<'_> {
    /// Index of the last grid point whose derivative is known.
    fn last(&self) -> usize {
        self.derivs.len() / self.n - 1
    }
}

impl DelayedPhases for Partial<'_> {
    fn phase(&self, j: usize, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return self.history.phase(j, t);
        }
        let n = self.n;
        let last = self.last();
        if last == 0 {
            // single point: linear extrapolation
            return Ok(self.phases[j] + t * self.derivs[j]);
        }
        let m = ((t / self.step).floor() as usize).min(last - 1);
        let u = (t - m as f64 * self.step) / self.step;
        // u > 1 only when extrapolating the last completed segment
        Ok(hermite_value(
            self.phases[m * n + j],
            self.derivs[m * n + j],
            self.phases[(m + 1) * n + j],
            self.derivs[(m + 1) * n + j],
            self.step,
            u,
        ))
    }
}

/// Integrates the delayed system from the given history.
pub fn integrate(params: &SystemParams, history: &HistorySpec, config: &IntegrationConfig) -> Result<Trajectory> {
    let (step, steps) = config.effective_step(params)?;
    integrate_fixed(params, history, step, steps, config.sample_stride)
}

/// Integrates with exactly `steps` steps of size `step`, without the delay cap.
pub(crate) fn integrate_fixed(
    params: &SystemParams,
    history: &HistorySpec,
    step: f64,
    steps: usize,
    sample_stride: usize,
) -> Result<Trajectory> {
    let n = params.n();
    if history.n() != n {
        return Err(Error::DimensionMismatch {
            what: "history".into(),
            expected: n,
            found: history.n(),
        });
    }
    if !history.covers(params.tau_max()) {
        return Err(Error::invalid(
            "history",
            format!("starts at {} but must cover [-{}, 0]", history.start(), params.tau_max()),
        ));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidStep(step));
    }

    let mut phases = Vec::with_capacity((steps + 1) * n);
    let mut derivs = Vec::with_capacity((steps + 1) * n);
    phases.extend(history.phases_at(0.0)?);
    let mut d0 = vec![0.0; n];
    rhs(params, 0.0, &phases, history, &mut d0)?;
    derivs.extend_from_slice(&d0);

    let mut stage = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut next_deriv = vec![0.0; n];
    let half = 0.5 * step;

    for m in 0..steps {
        let t = m as f64 * step;
        let t_half = t + half;
        let t_next = (m + 1) as f64 * step;
        {
            let view = Partial {
                history,
                n,
                step,
                phases: &phases,
                derivs: &derivs,
            };
            let y = &phases[m * n..(m + 1) * n];
            let k1 = &derivs[m * n..(m + 1) * n];

            for i in 0..n {
                stage[i] = y[i] + half * k1[i];
            }
            rhs(params, t_half, &stage, &view, &mut k2)?;
            for i in 0..n {
                stage[i] = y[i] + half * k2[i];
            }
            rhs(params, t_half, &stage, &view, &mut k3)?;
            for i in 0..n {
                stage[i] = y[i] + step * k3[i];
            }
            rhs(params, t_next, &stage, &view, &mut k4)?;
            for i in 0..n {
                next[i] = y[i] + step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            if next.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteState(t_next));
            }
            rhs(params, t_next, &next, &view, &mut next_deriv)?;
            if next_deriv.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteState(t_next));
            }
        }
        phases.extend_from_slice(&next);
        derivs.extend_from_slice(&next_deriv);
    }

    Ok(Trajectory {
        params: params.clone(),
        history: history.clone(),
        step,
        steps,
        sample_stride,
        phases,
        derivs,
    })
}

/// Result of a Richardson step-halving study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "order")]
pub enum ConvergenceOrder {
    Observed(f64),
    /// Successive differences at roundoff level; the scheme is exact here.
    Exact,
}

/// Observed order `p = log2(|θ_h - θ_{h/2}| / |θ_{h/2} - θ_{h/4}|)` at `t_probe`,
/// with the base step `min(dt, τ_min / 4)`.
pub fn convergence_order(params: &SystemParams, history: &HistorySpec, t_probe: f64, dt: f64) -> Result<ConvergenceOrder> {
    let (h, steps) = IntegrationConfig::new(t_probe, dt).effective_step(params)?;
    let finals: Vec<Vec<f64>> = [1usize, 2, 4]
        .iter()
        .map(|&r| {
            let traj = integrate_fixed(params, history, h / r as f64, steps * r, 1)?;
            Ok(traj.phases_at(traj.grid_len() - 1).to_vec())
        })
        .collect::<Result<_>>()?;
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let coarse = diff(&finals[0], &finals[1]);
    let fine = diff(&finals[1], &finals[2]);
    let scale = finals[2].iter().map(|v| v.abs()).fold(1.0, f64::max);
    let roundoff = 64.0 * f64::EPSILON * scale * steps as f64;
    if coarse <= roundoff || fine <= roundoff {
        return Ok(ConvergenceOrder::Exact);
    }
    Ok(ConvergenceOrder::Observed((coarse / fine).log2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DigraphTopology;

    #[test]
    fn step_is_capped_by_delays() {
        let p = SystemParams::with_uniform_delay(vec![0.0; 3], 1.0, 0.02, DigraphTopology::all_to_all(3).unwrap()).unwrap();
        let (h, steps) = IntegrationConfig::new(1.0, 0.01).effective_step(&p).unwrap();
        assert!((h - 0.005).abs() < 1e-15);
        assert_eq!(steps, 200);
        let (h, steps) = IntegrationConfig::new(0.003, 0.01).effective_step(&p).unwrap();
        assert_eq!((h, steps), (0.003, 1));
    }

    #[test]
    fn rejects_invalid_config() {
        let p = SystemParams::with_uniform_delay(vec![0.0; 2], 1.0, 0.0, DigraphTopology::all_to_all(2).unwrap()).unwrap();
        assert!(IntegrationConfig::new(1.0, 0.0).effective_step(&p).is_err());
        assert!(IntegrationConfig::new(-1.0, 0.1).effective_step(&p).is_err());
    }

    #[test]
    fn grid_points_are_exact_and_out_of_range_fails() {
        let p = SystemParams::with_uniform_delay(vec![0.3, -0.1, 0.05], 1.5, 0.2, DigraphTopology::ring(3).unwrap()).unwrap();
        let h = HistorySpec::Constant(vec![0.0, 0.5, 1.0]);
        let traj = integrate(&p, &h, &IntegrationConfig::new(2.0, 0.01)).unwrap();
        for m in [1, 17, traj.grid_len() - 1] {
            let t = traj.time(m);
            assert_eq!(traj.eval_dense(t).unwrap(), traj.phases_at(m));
            assert_eq!(traj.eval_frequency(t).unwrap(), traj.derivs_at(m));
        }
        assert_eq!(traj.eval_frequency(-0.1).unwrap(), vec![0.0; 3]);
        assert_eq!(traj.eval_frequency(0.0).unwrap(), vec![0.0; 3]);
        assert!(traj.eval_dense(2.5).is_err());
        assert!(traj.eval_dense(-0.3).is_err());
    }

    #[test]
    fn history_must_cover_delay() {
        let p = SystemParams::with_uniform_delay(vec![0.0; 2], 1.0, 1.0, DigraphTopology::all_to_all(2).unwrap()).unwrap();
        let short = crate::model::SampledHistory::from_fn(2, 0.5, 4, |_, _| 0.0, |_, _| 0.0).unwrap();
        let err = integrate(&p, &HistorySpec::Sampled(short), &IntegrationConfig::new(1.0, 0.01));
        assert!(err.is_err());
    }
}
