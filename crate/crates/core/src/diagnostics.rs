//! Diameters, the convex-combination envelope `q_θ`, and the ordering
//! inequalities that drive the phase-diameter bound.
//!
//! Oscillators are ranked by phase (ties broken by original index). Two
//! barycentres are then built over the ranked phases `θ_(1) ≤ … ≤ θ_(N)`:
//!
//! ```text
//! θ̄_N = θ_(N),  θ̄_{k-1} = (ā_{k-1} θ̄_k + θ_(k-1)) / (ā_{k-1} + 1)
//! θ̲_1 = θ_(1),  θ̲_{k+1} = (a̲_{k+1} θ̲_k + θ_(k+1)) / (a̲_{k+1} + 1)
//! ```
//!
//! with `ā_{k-1} = η(2N-k+2)(ā_k+1)`, `a̲_{k+1} = η(k+1+N)(a̲_k+1)`, and
//! `q_θ = θ̄_1 - θ̲_N`, which satisfies `(1 - 2/η) d_θ ≤ q_θ ≤ d_θ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{analyze_connectivity, DigraphTopology};
use crate::integrator::Trajectory;
use crate::model::HistorySpec;

/// Largest network for which `q_θ` is computed in double precision.
pub const MAX_CONVEX_N: usize = 120;

/// Grid used for the initial-interval diameters of non-constant histories.
pub const INITIAL_GRID: usize = 1024;

/// Number of ordered `k`-arrangements of `m` items, `m! / (m-k)!`.
pub fn perm_count(m: u64, k: u64) -> Result<u128> {
    if k > m {
        return Err(Error::KExceedsM { m, k });
    }
    ((m - k + 1)..=m).try_fold(1u128, |acc, f| {
        acc.checked_mul(u128::from(f)).ok_or(Error::PermutationOverflow { m, k })
    })
}

/// `P(m, k)` in floating point; never fails but may be infinite.
pub fn perm_count_f64(m: u64, k: u64) -> f64 {
    if k > m {
        return 0.0;
    }
    ((m - k + 1)..=m).map(|f| f as f64).product()
}

/// `max - min` of a vector; zero for empty input.
pub fn diameter(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if values.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// `d_θ`.
pub fn phase_diameter(phases: &[f64]) -> f64 {
    diameter(phases)
}

/// `d_ω`.
pub fn freq_diameter(freqs: &[f64]) -> f64 {
    diameter(freqs)
}

/// `D(Ω) = max |Ω_i - Ω_j|`.
pub fn natural_freq_diameter(omega: &[f64]) -> f64 {
    diameter(omega)
}

/// Kuramoto order parameter `|Σ e^{iθ_k}| / N`.
pub fn order_parameter(phases: &[f64]) -> f64 {
    if phases.is_empty() {
        return 0.0;
    }
    let (s, c) = phases.iter().fold((0.0, 0.0), |(s, c), th| (s + th.sin(), c + th.cos()));
    s.hypot(c) / phases.len() as f64
}

/// `(D_θ(0), D_ω(0))`: spreads of phases and frequencies over the whole
/// initial interval `[-τ, 0]`. Exact for constant histories; otherwise taken
/// on a uniform grid of `grid_resolution` points.
pub fn initial_diameters(history: &HistorySpec, tau: f64, grid_resolution: usize) -> Result<(f64, f64)> {
    match history {
        HistorySpec::Constant(p) => Ok((diameter(p), 0.0)),
        HistorySpec::Sampled(_) => {
            let points = grid_resolution.max(2);
            let mut phases = Vec::with_capacity(points * history.n());
            let mut freqs = Vec::with_capacity(points * history.n());
            for k in 0..points {
                let s = if tau == 0.0 {
                    0.0
                } else {
                    -tau + tau * k as f64 / (points - 1) as f64
                };
                let s = s.min(0.0);
                phases.extend(history.phases_at(s)?);
                freqs.extend(history.frequencies_at(s)?);
            }
            Ok((diameter(&phases), diameter(&freqs)))
        }
    }
}

/// Upper-barycentre coefficients `ā_1..ā_N` from the recurrence.
pub fn upper_coefficients(n: usize, eta: f64) -> Vec<f64> {
    let mut a = vec![0.0; n];
    for k in (2..=n).rev() {
        a[k - 2] = eta * (2 * n - k + 2) as f64 * (a[k - 1] + 1.0);
    }
    a
}

/// Lower-barycentre coefficients `a̲_1..a̲_N` from the recurrence.
pub fn lower_coefficients(n: usize, eta: f64) -> Vec<f64> {
    let mut a = vec![0.0; n];
    for k in 1..n {
        a[k] = eta * (k + 1 + n) as f64 * (a[k - 1] + 1.0);
    }
    a
}

/// `ā_{k-1} = Σ_{j=1}^{N-k+1} η^j P(2N-k+2, j)`.
pub fn upper_coefficients_by_sum(n: usize, eta: f64) -> Vec<f64> {
    let mut a = vec![0.0; n];
    for k in 2..=n {
        let m = (2 * n - k + 2) as u64;
        a[k - 2] = (1..=(n - k + 1) as u64).map(|j| eta.powi(j as i32) * perm_count_f64(m, j)).sum();
    }
    a
}

/// `a̲_{k+1} = Σ_{j=1}^{k} η^j P(k+1+N, j)`.
pub fn lower_coefficients_by_sum(n: usize, eta: f64) -> Vec<f64> {
    let mut a = vec![0.0; n];
    for k in 1..n {
        let m = (k + 1 + n) as u64;
        a[k] = (1..=k as u64).map(|j| eta.powi(j as i32) * perm_count_f64(m, j)).sum();
    }
    a
}

/// Stable ranking of oscillators by phase.
pub fn phase_order(phases: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..phases.len()).collect();
    order.sort_by(|&a, &b| phases[a].total_cmp(&phases[b]));
    order
}

/// Output of the convex-combination construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexCombinationState {
    pub eta: f64,
    /// `permutation[k]` is the original index of the `k`-th smallest phase.
    pub permutation: Vec<usize>,
    pub a_bar: Vec<f64>,
    pub a_under: Vec<f64>,
    pub theta_bar: Vec<f64>,
    pub theta_under: Vec<f64>,
    pub q: f64,
    pub beta: f64,
}

/// Builds both barycentre chains for one phase configuration.
pub fn convex_combination(phases: &[f64], eta: f64) -> Result<ConvexCombinationState> {
    if !(eta > 2.0) {
        return Err(Error::EtaTooSmall(eta));
    }
    let n = phases.len();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    if n > MAX_CONVEX_N {
        return Err(Error::CoefficientOverflow { n, eta });
    }
    let a_bar = upper_coefficients(n, eta);
    let a_under = lower_coefficients(n, eta);
    if a_bar.iter().chain(&a_under).any(|a| !a.is_finite()) {
        return Err(Error::CoefficientOverflow { n, eta });
    }

    let permutation = phase_order(phases);
    let sorted: Vec<f64> = permutation.iter().map(|&i| phases[i]).collect();

    let mut theta_bar = vec![0.0; n];
    theta_bar[n - 1] = sorted[n - 1];
    for k in (0..n - 1).rev() {
        let a = a_bar[k];
        theta_bar[k] = (a * theta_bar[k + 1] + sorted[k]) / (a + 1.0);
    }
    let mut theta_under = vec![0.0; n];
    theta_under[0] = sorted[0];
    for k in 1..n {
        let a = a_under[k];
        theta_under[k] = (a * theta_under[k - 1] + sorted[k]) / (a + 1.0);
    }

    Ok(ConvexCombinationState {
        eta,
        q: theta_bar[0] - theta_under[n - 1],
        beta: 1.0 - 2.0 / eta,
        permutation,
        a_bar,
        a_under,
        theta_bar,
        theta_under,
    })
}

/// Lower bound on `η` for the ordering inequalities:
/// `max(1/sin ξ, 1/cos(R_ω τ), 2/(1 - ζ/ξ))`. `None` when `R_ω τ ≥ π/2`.
pub fn eta_lower_bound(zeta: f64, xi: f64, r_omega: f64, tau: f64) -> Option<f64> {
    let lag = r_omega * tau;
    if lag >= std::f64::consts::FRAC_PI_2 {
        return None;
    }
    Some((1.0 / xi.sin()).max(1.0 / lag.cos()).max(2.0 / (1.0 - zeta / xi)))
}

/// One row of the ordering-inequality check, in ranked (1-based) indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinIndexRow {
    pub n: usize,
    pub k_bar: usize,
    pub k_under: usize,
    /// `Σ_{i=n}^{N} η^{i-n} min_{j ∈ N_i, j ≤ i} sin(θ_j - θ_i)`
    pub upper_lhs: f64,
    /// `sin(θ_{k̄_n} - θ_N)`
    pub upper_rhs: f64,
    /// `Σ_{i=1}^{n} η^{n-i} max_{j ∈ N_i, j ≥ i} sin(θ_j - θ_i)`
    pub lower_lhs: f64,
    /// `sin(θ_{k̲_n} - θ_1)`
    pub lower_rhs: f64,
    pub upper_holds: bool,
    pub lower_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinIndexReport {
    pub rows: Vec<MinIndexRow>,
    pub holds: bool,
}

/// Evaluates both ordering inequalities for every `n` at the current phases.
///
/// Phases are ranked internally and the neighbor sets relabelled to ranks.
/// An empty `min`/`max` contributes 0.
pub fn check_min_index(
    phases: &[f64],
    eta: f64,
    topology: &DigraphTopology,
    zeta: f64,
    xi: f64,
    r_omega: f64,
    tau: f64,
) -> Result<MinIndexReport> {
    let n = phases.len();
    if topology.len() != n {
        return Err(Error::DimensionMismatch {
            what: "topology".into(),
            expected: n,
            found: topology.len(),
        });
    }
    let d = diameter(phases);
    if !(d < zeta && zeta < xi && xi < std::f64::consts::PI) {
        return Err(Error::PreconditionViolated(format!(
            "need d_theta < zeta < xi < pi, got d_theta = {d}, zeta = {zeta}, xi = {xi}"
        )));
    }
    let bound = eta_lower_bound(zeta, xi, r_omega, tau).ok_or_else(|| {
        Error::PreconditionViolated(format!(
            "R_omega * tau = {} >= pi/2 leaves 1/cos(R_omega tau) undefined",
            r_omega * tau
        ))
    })?;
    if !(eta > bound) {
        return Err(Error::PreconditionViolated(format!(
            "eta = {eta} must exceed max(1/sin xi, 1/cos(R_omega tau), 2/(1 - zeta/xi)) = {bound}"
        )));
    }
    if !analyze_connectivity(topology).strongly_connected {
        return Err(Error::NotStronglyConnected);
    }

    let order = phase_order(phases);
    let mut rank = vec![0; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let theta: Vec<f64> = order.iter().map(|&i| phases[i]).collect();
    let nbrs: Vec<Vec<usize>> = order
        .iter()
        .map(|&i| topology.neighbors(i).iter().map(|&j| rank[j]).collect())
        .collect();

    let low_term: Vec<f64> = (0..n)
        .map(|i| {
            nbrs[i]
                .iter()
                .filter(|&&j| j <= i)
                .map(|&j| (theta[j] - theta[i]).sin())
                .reduce(f64::min)
                .unwrap_or(0.0)
        })
        .collect();
    let high_term: Vec<f64> = (0..n)
        .map(|i| {
            nbrs[i]
                .iter()
                .filter(|&&j| j >= i)
                .map(|&j| (theta[j] - theta[i]).sin())
                .reduce(f64::max)
                .unwrap_or(0.0)
        })
        .collect();

    let mut rows = Vec::with_capacity(n);
    for m in 0..n {
        let k_bar = (m..n).flat_map(|i| nbrs[i].iter().copied()).min();
        let k_under = (0..=m).flat_map(|i| nbrs[i].iter().copied()).max();
        let (Some(k_bar), Some(k_under)) = (k_bar, k_under) else {
            return Err(Error::NotStronglyConnected);
        };
        let (mut upper_lhs, mut upper_mag) = (0.0, 0.0f64);
        for i in m..n {
            let term = eta.powi((i - m) as i32) * low_term[i];
            upper_lhs += term;
            upper_mag += term.abs();
        }
        let (mut lower_lhs, mut lower_mag) = (0.0, 0.0f64);
        for i in 0..=m {
            let term = eta.powi((m - i) as i32) * high_term[i];
            lower_lhs += term;
            lower_mag += term.abs();
        }
        let upper_rhs = (theta[k_bar] - theta[n - 1]).sin();
        let lower_rhs = (theta[k_under] - theta[0]).sin();
        let tol = |mag: f64| 1e-12 * mag.max(1.0);
        let upper_holds = upper_lhs <= upper_rhs + tol(upper_mag);
        let lower_holds = lower_lhs >= lower_rhs - tol(lower_mag);
        rows.push(MinIndexRow {
            n: m + 1,
            k_bar: k_bar + 1,
            k_under: k_under + 1,
            upper_lhs,
            upper_rhs,
            lower_lhs,
            lower_rhs,
            upper_holds,
            lower_holds,
        });
    }
    let holds = rows.iter().all(|r| r.upper_holds && r.lower_holds);
    Ok(MinIndexReport { rows, holds })
}

/// Time series of the diagnostic quantities at the trajectory's samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsSeries {
    /// Grid index of each sample.
    pub indices: Vec<usize>,
    pub times: Vec<f64>,
    pub d_theta: Vec<f64>,
    pub d_omega: Vec<f64>,
    pub q_theta: Option<Vec<f64>>,
    /// Not part of the synchronization theory; reported for observability.
    pub order_param: Vec<f64>,
    pub d_natural: f64,
    pub d_theta_initial: f64,
    pub d_omega_initial: f64,
}

impl DiagnosticsSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Assembles every diagnostic series over the sampled grid. Frequencies are
/// the stored right-hand sides (right limits at `t = 0`).
pub fn diagnostics_over(traj: &Trajectory, eta: Option<f64>) -> Result<DiagnosticsSeries> {
    let params = traj.params();
    let indices: Vec<usize> = traj.sample_indices().collect();
    let times = indices.iter().map(|&m| traj.time(m)).collect();
    let d_theta = indices.iter().map(|&m| phase_diameter(traj.phases_at(m))).collect();
    let d_omega = indices.iter().map(|&m| freq_diameter(traj.grid_frequencies(m))).collect();
    let order_param = indices.iter().map(|&m| order_parameter(traj.phases_at(m))).collect();
    let q_theta = eta
        .map(|eta| {
            indices
                .iter()
                .map(|&m| convex_combination(traj.phases_at(m), eta).map(|s| s.q))
                .collect::<Result<Vec<f64>>>()
        })
        .transpose()?;
    let (d_theta_initial, d_omega_initial) = initial_diameters(traj.history(), params.tau_max(), INITIAL_GRID)?;
    Ok(DiagnosticsSeries {
        indices,
        times,
        d_theta,
        d_omega,
        q_theta,
        order_param,
        d_natural: natural_freq_diameter(params.omega()),
        d_theta_initial,
        d_omega_initial,
    })
}
