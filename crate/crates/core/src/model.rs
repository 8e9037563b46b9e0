//! The delayed Kuramoto vector field
//!
//! ```text
//! dθ_i/dt = Ω_i + κ/(N-1) Σ_{j ∈ N_i} sin(θ_j(t - τ_ij) - θ_i(t))
//! ```
//!
//! and its time derivative, which drives the frequencies `ω_i = dθ_i/dt`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DigraphTopology;

/// Natural frequencies, coupling, delays and topology of one system.
///
/// Delays are receiver-indexed: `delays[i][j]` is the lag with which `i`
/// observes `j`. Diagonal entries are forced to zero and entries without an
/// arc never enter the dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    omega: Vec<f64>,
    kappa: f64,
    delays: Vec<Vec<f64>>,
    topology: DigraphTopology,
    tau_max: f64,
    r_omega: f64,
    tau_i: Vec<f64>,
    tau_0: f64,
}

impl SystemParams {
    pub fn new(omega: Vec<f64>, kappa: f64, mut delays: Vec<Vec<f64>>, topology: DigraphTopology) -> Result<Self> {
        let n = topology.len();
        if omega.len() != n {
            return Err(Error::DimensionMismatch {
                what: "natural frequencies".into(),
                expected: n,
                found: omega.len(),
            });
        }
        if let Some(w) = omega.iter().find(|w| !w.is_finite()) {
            return Err(Error::invalid("omega", format!("non-finite entry {w}")));
        }
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::NegativeValue {
                what: "kappa".into(),
                value: kappa,
            });
        }
        if delays.len() != n {
            return Err(Error::DimensionMismatch {
                what: "delay matrix rows".into(),
                expected: n,
                found: delays.len(),
            });
        }
        for (i, row) in delays.iter_mut().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    what: format!("delay matrix row {i}"),
                    expected: n,
                    found: row.len(),
                });
            }
            if let Some(&tau) = row.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
                return Err(Error::NegativeValue {
                    what: format!("delay in row {i}"),
                    value: tau,
                });
            }
            row[i] = 0.0;
        }

        let tau_max = delays.iter().flatten().copied().fold(0.0, f64::max);
        let r_omega = omega.iter().map(|w| w.abs()).fold(0.0, f64::max) + kappa;

        // tau_i: the largest lag with which oscillator i is heard by its listeners.
        let mut tau_i = vec![0.0f64; n];
        for (j, row) in delays.iter().enumerate() {
            for &i in topology.neighbors(j) {
                tau_i[i] = tau_i[i].max(row[i]);
            }
        }
        let tau_0 = tau_i.iter().copied().fold(f64::INFINITY, f64::min);

        Ok(Self {
            omega,
            kappa,
            delays,
            topology,
            tau_max,
            r_omega,
            tau_i,
            tau_0,
        })
    }

    /// Same topology and delays with a uniform delay on every off-diagonal entry.
    pub fn with_uniform_delay(omega: Vec<f64>, kappa: f64, tau: f64, topology: DigraphTopology) -> Result<Self> {
        let n = topology.len();
        let delays = (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { tau }).collect()).collect();
        Self::new(omega, kappa, delays, topology)
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn delays(&self) -> &[Vec<f64>] {
        &self.delays
    }

    pub fn delay(&self, i: usize, j: usize) -> f64 {
        self.delays[i][j]
    }

    pub fn topology(&self) -> &DigraphTopology {
        &self.topology
    }

    /// `τ = max_ij τ_ij`; the history must cover `[-τ, 0]`.
    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    /// `R_ω = max_i |Ω_i| + κ`.
    pub fn r_omega(&self) -> f64 {
        self.r_omega
    }

    pub fn tau_i(&self) -> &[f64] {
        &self.tau_i
    }

    pub fn tau_0(&self) -> f64 {
        self.tau_0
    }

    /// Smallest strictly positive delay carried by an arc, if any.
    pub fn min_positive_active_delay(&self) -> Option<f64> {
        (0..self.n())
            .flat_map(|i| self.topology.neighbors(i).iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.delays[i][j])
            .filter(|&tau| tau > 0.0)
            .reduce(f64::min)
    }

    /// `κ / (N - 1)`, zero for a single oscillator.
    pub fn coupling_factor(&self) -> f64 {
        if self.n() > 1 {
            self.kappa / (self.n() - 1) as f64
        } else {
            0.0
        }
    }

    /// Copy with every natural frequency shifted by `c`.
    pub fn with_shifted_omega(&self, c: f64) -> Result<Self> {
        Self::new(
            self.omega.iter().map(|w| w + c).collect(),
            self.kappa,
            self.delays.clone(),
            self.topology.clone(),
        )
    }

    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::new(self.omega.clone(), kappa, self.delays.clone(), self.topology.clone())
    }
}

/// `R_ω = max_i |Ω_i| + κ`, the uniform bound on every frequency.
pub fn velocity_bound(params: &SystemParams) -> f64 {
    params.r_omega()
}

/// Initial data on `[-τ, 0]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HistorySpec {
    /// `θ_i(s) = θ⁰_i` for every `s ≤ 0`.
    Constant(Vec<f64>),
    /// Cubic Hermite interpolation through phase and derivative samples.
    Sampled(SampledHistory),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledHistory {
    times: Vec<f64>,
    phases: Vec<Vec<f64>>,
    derivs: Vec<Vec<f64>>,
}

impl SampledHistory {
    /// `times` must be strictly increasing and end at 0.
    pub fn new(times: Vec<f64>, phases: Vec<Vec<f64>>, derivs: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::invalid("history", "need at least two samples"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("history", "sample times must increase"));
        }
        if *times.last().unwrap() != 0.0 {
            return Err(Error::invalid("history", "last sample time must be 0"));
        }
        for (what, block) in [("history phases", &phases), ("history derivatives", &derivs)] {
            if block.len() != times.len() {
                return Err(Error::DimensionMismatch {
                    what: what.into(),
                    expected: times.len(),
                    found: block.len(),
                });
            }
        }
        let n = phases[0].len();
        for row in phases.iter().chain(&derivs) {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "history sample width".into(),
                    expected: n,
                    found: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("history", "non-finite sample"));
            }
        }
        Ok(Self { times, phases, derivs })
    }

    /// Samples a smooth function and its derivative on a uniform grid of `[-tau, 0]`.
    pub fn from_fn(
        n: usize,
        tau: f64,
        samples: usize,
        phase: impl Fn(usize, f64) -> f64,
        deriv: impl Fn(usize, f64) -> f64,
    ) -> Result<Self> {
        let samples = samples.max(2);
        let times: Vec<f64> = (0..samples).map(|k| -tau + tau * k as f64 / (samples - 1) as f64).collect();
        let mut times = times;
        *times.last_mut().unwrap() = 0.0;
        let phases = times.iter().map(|&s| (0..n).map(|i| phase(i, s)).collect()).collect();
        let derivs = times.iter().map(|&s| (0..n).map(|i| deriv(i, s)).collect()).collect();
        Self::new(times, phases, derivs)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn phases(&self) -> &[Vec<f64>] {
        &self.phases
    }

    pub fn derivs(&self) -> &[Vec<f64>] {
        &self.derivs
    }

    fn locate(&self, t: f64) -> Result<(usize, f64, f64)> {
        let start = self.times[0];
        if t < start || t > 0.0 {
            return Err(Error::AccessorOutOfRange { t, start });
        }
        let k = match self.times.partition_point(|&s| s <= t) {
            0 => 0,
            p => (p - 1).min(self.times.len() - 2),
        };
        let h = self.times[k + 1] - self.times[k];
        Ok((k, (t - self.times[k]) / h, h))
    }
}

impl HistorySpec {
    pub fn n(&self) -> usize {
        match self {
            HistorySpec::Constant(p) => p.len(),
            HistorySpec::Sampled(s) => s.phases[0].len(),
        }
    }

    /// Earliest time the history covers.
    pub fn start(&self) -> f64 {
        match self {
            HistorySpec::Constant(_) => f64::NEG_INFINITY,
            HistorySpec::Sampled(s) => s.times[0],
        }
    }

    pub fn covers(&self, tau: f64) -> bool {
        self.start() <= -tau
    }

    /// `θ_i(t)` for `t ≤ 0`.
    pub fn phase(&self, i: usize, t: f64) -> Result<f64> {
        match self {
            HistorySpec::Constant(p) => {
                if t > 0.0 {
                    return Err(Error::OutOfRange {
                        t,
                        start: f64::NEG_INFINITY,
                        end: 0.0,
                    });
                }
                Ok(p[i])
            }
            HistorySpec::Sampled(s) => {
                let (k, u, h) = s.locate(t)?;
                Ok(hermite_value(
                    s.phases[k][i],
                    s.derivs[k][i],
                    s.phases[k + 1][i],
                    s.derivs[k + 1][i],
                    h,
                    u,
                ))
            }
        }
    }

    /// `ω_i(t)` for `t ≤ 0` (zero for constant histories).
    pub fn frequency(&self, i: usize, t: f64) -> Result<f64> {
        match self {
            HistorySpec::Constant(_) => {
                if t > 0.0 {
                    return Err(Error::OutOfRange {
                        t,
                        start: f64::NEG_INFINITY,
                        end: 0.0,
                    });
                }
                Ok(0.0)
            }
            HistorySpec::Sampled(s) => {
                let (k, u, h) = s.locate(t)?;
                Ok(hermite_slope(
                    s.phases[k][i],
                    s.derivs[k][i],
                    s.phases[k + 1][i],
                    s.derivs[k + 1][i],
                    h,
                    u,
                ))
            }
        }
    }

    pub fn phases_at(&self, t: f64) -> Result<Vec<f64>> {
        (0..self.n()).map(|i| self.phase(i, t)).collect()
    }

    pub fn frequencies_at(&self, t: f64) -> Result<Vec<f64>> {
        (0..self.n()).map(|i| self.frequency(i, t)).collect()
    }

    /// Adds `c` to every phase sample.
    pub fn shifted(&self, c: f64) -> Self {
        match self {
            HistorySpec::Constant(p) => HistorySpec::Constant(p.iter().map(|x| x + c).collect()),
            HistorySpec::Sampled(s) => HistorySpec::Sampled(SampledHistory {
                times: s.times.clone(),
                phases: s.phases.iter().map(|row| row.iter().map(|x| x + c).collect()).collect(),
                derivs: s.derivs.clone(),
            }),
        }
    }
}

/// Cubic Hermite value on a segment of width `h` at local coordinate `u ∈ [0, 1]`.
#[inline]
pub(crate) fn hermite_value(y0: f64, f0: f64, y1: f64, f1: f64, h: f64, u: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1
}

#[inline]
pub(crate) fn hermite_slope(y0: f64, f0: f64, y1: f64, f1: f64, h: f64, u: f64) -> f64 {
    let u2 = u * u;
    (6.0 * u2 - 6.0 * u) * (y0 - y1) / h + (3.0 * u2 - 4.0 * u + 1.0) * f0 + (3.0 * u2 - 2.0 * u) * f1
}

/// Source of delayed phases `θ_j(t)` at past times.
pub trait DelayedPhases {
    fn phase(&self, j: usize, t: f64) -> Result<f64>;
}

/// Source of delayed phases and frequencies.
pub trait DelayedState: DelayedPhases {
    fn frequency(&self, j: usize, t: f64) -> Result<f64>;
}

impl DelayedPhases for HistorySpec {
    fn phase(&self, j: usize, t: f64) -> Result<f64> {
        HistorySpec::phase(self, j, t)
    }
}

impl DelayedState for HistorySpec {
    fn frequency(&self, j: usize, t: f64) -> Result<f64> {
        HistorySpec::frequency(self, j, t)
    }
}

/// Phase velocities at time `t` given the current phases.
///
/// Zero-delay arcs read `phases` directly; every other arc asks `delayed` for
/// `θ_j(t - τ_ij)`.
pub fn rhs(params: &SystemParams, t: f64, phases: &[f64], delayed: &impl DelayedPhases, out: &mut [f64]) -> Result<()> {
    let factor = params.coupling_factor();
    let topology = params.topology();
    for (i, slot) in out.iter_mut().enumerate() {
        let theta_i = phases[i];
        let row = &params.delays[i];
        let mut sum = 0.0;
        for &j in topology.neighbors(i) {
            let tau = row[j];
            let theta_j = if tau == 0.0 { phases[j] } else { delayed.phase(j, t - tau)? };
            sum += (theta_j - theta_i).sin();
        }
        *slot = params.omega[i] + factor * sum;
    }
    Ok(())
}

/// Convenience wrapper returning a fresh vector.
pub fn rhs_vec(params: &SystemParams, t: f64, phases: &[f64], delayed: &impl DelayedPhases) -> Result<Vec<f64>> {
    let mut out = vec![0.0; phases.len()];
    rhs(params, t, phases, delayed, &mut out)?;
    Ok(out)
}

/// Frequency derivatives
/// `dω_i/dt = κ/(N-1) Σ_k cos(θ_k(t-τ_ik) - θ_i(t)) (ω_k(t-τ_ik) - ω_i(t))`.
pub fn frequency_rhs(params: &SystemParams, t: f64, phases: &[f64], freqs: &[f64], delayed: &impl DelayedState) -> Result<Vec<f64>> {
    let factor = params.coupling_factor();
    let topology = params.topology();
    (0..phases.len())
        .map(|i| {
            let mut sum = 0.0;
            for &k in topology.neighbors(i) {
                let tau = params.delays[i][k];
                let (theta_k, omega_k) = if tau == 0.0 {
                    (phases[k], freqs[k])
                } else {
                    (delayed.phase(k, t - tau)?, delayed.frequency(k, t - tau)?)
                };
                sum += (theta_k - phases[i]).cos() * (omega_k - freqs[i]);
            }
            Ok(factor * sum)
        })
        .collect()
}
