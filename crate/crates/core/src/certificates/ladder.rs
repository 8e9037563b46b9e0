//! Window-based frequency contraction: the per-window ladder for strongly
//! connected graphs and the three-window rate for all-to-all coupling.

use serde::Serialize;

use super::StrongCertificate;
use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::model::SystemParams;

/// Lower target for the translated minimum frequency `m_0`.
pub const FRAME_EPSILON: f64 = 0.1;

/// Absolute slack allowed when comparing measured and predicted contraction.
pub const LADDER_SLACK: f64 = 1e-6;

/// `Γ = (ξ_*/(N-1))^γ e^{-2κγτ} (1 - e^{-κτ/(N-1)})^{γ-1} (1 - e^{-κσ/(N-1)})`.
pub fn gamma_factor(n: usize, xi_star: f64, kappa: f64, tau: f64, gamma_depth: usize, sigma: f64) -> f64 {
    let nm1 = n.saturating_sub(1) as f64;
    let g = gamma_depth as i32;
    (xi_star / nm1).powi(g)
        * (-2.0 * kappa * gamma_depth as f64 * tau).exp()
        * (1.0 - (-kappa * tau / nm1).exp()).powi(g - 1)
        * (1.0 - (-kappa * sigma / nm1).exp())
}

/// `C`, `C̃` and `γ̃` of the all-to-all argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateConstants {
    pub c: f64,
    pub c_tilde: f64,
    pub gamma_rate: f64,
}

pub fn rate_constants(n: usize, xi_star: f64, kappa: f64, tau: f64) -> RateConstants {
    let nm1 = n.saturating_sub(1) as f64;
    // complements 1 - C and 1 - C̃ stay accurate when C̃ is close to 1
    let one_minus_c = (-2.0 * kappa * tau).exp().min((xi_star / nm1) * -(-kappa * tau).exp_m1());
    let one_minus_c_tilde = (-kappa * tau).exp() * one_minus_c;
    RateConstants {
        c: 1.0 - one_minus_c,
        c_tilde: 1.0 - one_minus_c_tilde,
        gamma_rate: -(-one_minus_c_tilde).ln_1p() / (3.0 * tau),
    }
}

/// One window of the ladder, in the original (untranslated) frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderStep {
    pub n: usize,
    /// Right end `2γnτ + t_a` shared by all oscillator windows.
    pub end: f64,
    pub big_m: f64,
    pub small_m: f64,
    pub d_n: f64,
    pub sigma_n: f64,
    pub gamma_n: f64,
    /// `D̂_n`, started from the measured `D_0`.
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionLadder {
    pub gamma_depth: usize,
    pub tau: f64,
    pub anchor: f64,
    /// Translation making the minimum frequency at least `FRAME_EPSILON`.
    pub c_shift: f64,
    pub steps: Vec<LadderStep>,
}

impl ContractionLadder {
    /// `(M_n + c, m_n + c)` in the translated frame.
    pub fn shifted(&self, n: usize) -> (f64, f64) {
        let s = &self.steps[n];
        (s.big_m + self.c_shift, s.small_m + self.c_shift)
    }

    /// Indices `n` with `D_{n+1} > (1 - Γ_n) D_n + slack`.
    pub fn violations(&self) -> Vec<usize> {
        self.steps
            .windows(2)
            .filter(|w| w[1].d_n > (1.0 - w[0].gamma_n) * w[0].d_n + LADDER_SLACK)
            .map(|w| w[0].n)
            .collect()
    }
}

fn frequency_samples(traj: &Trajectory, i: usize, a: f64, b: f64, out: &mut impl FnMut(f64)) -> Result<()> {
    let mut step = |t: f64| -> Result<()> {
        if t < 0.0 {
            out(traj.history().frequency(i, t)?);
        }
        Ok(())
    };
    if a < 0.0 {
        let h = traj.step();
        let count = ((b.min(0.0) - a) / h).ceil() as usize;
        for k in 0..count {
            step(a + k as f64 * h)?;
        }
    }
    for m in traj.grid_indices_in(a.max(0.0), b) {
        out(traj.derivs_at(m)[i]);
    }
    for t in [a, b] {
        if t > 0.0 {
            out(traj.frequency(i, t)?);
        }
    }
    Ok(())
}

fn check_horizon(traj: &Trajectory, needed: f64) -> Result<()> {
    if needed > traj.t_end() + 1e-9 * traj.t_end().max(1.0) {
        return Err(Error::HorizonTooShort {
            needed,
            available: traj.t_end(),
        });
    }
    Ok(())
}

/// Measures `M_n`, `m_n` on `I_n^i = [2γnτ + t_a - τ_i, 2γnτ + t_a]` with
/// `t_a = max(t_*, τ)` for every window that fits in the run, and pairs them
/// with `Γ_n`.
pub fn contraction_ladder(cert: &StrongCertificate, traj: &Trajectory, gamma_depth: usize) -> Result<ContractionLadder> {
    let anchor = cert.anchor().ok_or(Error::CertificateInvalid)?;
    let params = traj.params();
    let n = params.n();
    if n < 2 {
        return Err(Error::invalid("N", "the ladder needs at least two oscillators"));
    }
    let tau = params.tau_max();
    if tau == 0.0 {
        return Err(Error::ZeroDelay);
    }
    if gamma_depth == 0 {
        return Err(Error::invalid("gamma_depth", "must be at least 1"));
    }
    let span = 2.0 * gamma_depth as f64 * tau;
    check_horizon(traj, anchor + span)?;
    let windows = ((traj.t_end() - anchor) / span + 1e-9).floor() as usize + 1;

    let sigma = |d: f64| params.tau_0().min(d / (4.0 * cert.kappa * cert.r_omega));
    let gamma = |d: f64| gamma_factor(n, cert.xi_star, cert.kappa, tau, gamma_depth, sigma(d));

    let mut steps: Vec<LadderStep> = Vec::with_capacity(windows);
    for k in 0..windows {
        let end = (anchor + span * k as f64).min(traj.t_end());
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for (i, &tau_i) in params.tau_i().iter().enumerate() {
            frequency_samples(traj, i, end - tau_i, end, &mut |w| {
                hi = hi.max(w);
                lo = lo.min(w);
            })?;
        }
        let d_n = hi - lo;
        let predicted = match steps.last() {
            Some(prev) => (1.0 - gamma(prev.predicted)) * prev.predicted,
            None => d_n,
        };
        steps.push(LadderStep {
            n: k,
            end,
            big_m: hi,
            small_m: lo,
            d_n,
            sigma_n: sigma(d_n),
            gamma_n: gamma(d_n),
            predicted,
        });
    }
    Ok(ContractionLadder {
        gamma_depth,
        tau,
        anchor,
        c_shift: (FRAME_EPSILON - steps[0].small_m).max(0.0),
        steps,
    })
}

/// Decay constants of the all-to-all argument and the resulting envelope
/// `d_ω(t) ≤ e^{-γ̃(t - t_a - 2τ)} D*_ω(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AllToAllRate {
    pub c: f64,
    pub c_tilde: f64,
    pub gamma_rate: f64,
    /// `𝒞 = e^{γ̃(t_a + 2τ)} D*_ω(0)`.
    pub envelope_scale: f64,
    pub anchor: f64,
    pub tau: f64,
    pub d_omega_star_0: f64,
}

impl AllToAllRate {
    pub fn envelope(&self, t: f64) -> f64 {
        (-self.gamma_rate * (t - self.anchor - 2.0 * self.tau)).exp() * self.d_omega_star_0
    }
}

pub fn all_to_all_rate(cert: &StrongCertificate, params: &SystemParams, d_omega_star_0: f64) -> Result<AllToAllRate> {
    if !params.topology().is_all_to_all() {
        return Err(Error::NotAllToAll);
    }
    let tau = params.tau_max();
    if tau == 0.0 {
        return Err(Error::ZeroDelay);
    }
    let anchor = cert.anchor().ok_or(Error::CertificateInvalid)?;
    let RateConstants { c, c_tilde, gamma_rate } = rate_constants(params.n(), cert.xi_star, params.kappa(), tau);
    Ok(AllToAllRate {
        c,
        c_tilde,
        gamma_rate,
        envelope_scale: (gamma_rate * (anchor + 2.0 * tau)).exp() * d_omega_star_0,
        anchor,
        tau,
        d_omega_star_0,
    })
}

/// `D*_θ(n)`, `D*_ω(n)` over `[t + (n-1)τ, t + nτ]` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowedDiameters {
    pub anchor: f64,
    pub tau: f64,
    pub d_theta_star: Vec<f64>,
    pub d_omega_star: Vec<f64>,
}

pub fn windowed_diameters(traj: &Trajectory, anchor: f64, tau: f64, n_max: usize) -> Result<WindowedDiameters> {
    let start = anchor - tau;
    if start < -traj.params().tau_max() - 1e-12 {
        return Err(Error::OutOfRange {
            t: start,
            start: -traj.params().tau_max(),
            end: traj.t_end(),
        });
    }
    check_horizon(traj, anchor + n_max as f64 * tau)?;
    let n = traj.n();
    let mut d_theta_star = Vec::with_capacity(n_max + 1);
    let mut d_omega_star = Vec::with_capacity(n_max + 1);
    for k in 0..=n_max {
        let b = (anchor + k as f64 * tau).min(traj.t_end());
        let a = b - tau;
        let (mut whi, mut wlo) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..n {
            frequency_samples(traj, i, a, b, &mut |w| {
                whi = whi.max(w);
                wlo = wlo.min(w);
            })?;
        }
        let (mut phi, mut plo) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut take = |v: f64| {
            phi = phi.max(v);
            plo = plo.min(v);
        };
        for i in 0..n {
            if a < 0.0 {
                let h = traj.step();
                let count = ((b.min(0.0) - a) / h).ceil() as usize;
                for s in 0..count {
                    take(traj.phase(i, a + s as f64 * h)?);
                }
            }
            for m in traj.grid_indices_in(a.max(0.0), b) {
                take(traj.phases_at(m)[i]);
            }
            for t in [a, b] {
                take(traj.phase(i, t)?);
            }
        }
        d_theta_star.push(phi - plo);
        d_omega_star.push(whi - wlo);
    }
    Ok(WindowedDiameters {
        anchor,
        tau,
        d_theta_star,
        d_omega_star,
    })
}
