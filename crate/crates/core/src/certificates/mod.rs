//! Sufficient conditions for frequency synchronization, the constants they
//! produce, and the predicted envelopes that simulated runs are checked
//! against.

mod empirical;
mod ladder;
mod search;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::diagnostics::{
    convex_combination, diameter, eta_lower_bound, initial_diameters, natural_freq_diameter, perm_count_f64, INITIAL_GRID,
};
use crate::error::{Error, Result};
use crate::model::{HistorySpec, SystemParams};

pub use empirical::{fit_decay_rate, fit_log_linear, sync_detect, DecayFit, SyncReport};
pub use ladder::{
    all_to_all_rate, contraction_ladder, gamma_factor, rate_constants, windowed_diameters, AllToAllRate, ContractionLadder, LadderStep,
    RateConstants, WindowedDiameters, FRAME_EPSILON, LADDER_SLACK,
};
pub use search::{search_certificate, GridSpec, SearchOutcome};

/// The free parameters `(ζ, ξ, d_∞, η)` of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct CertificateTuple {
    pub zeta: f64,
    pub xi: f64,
    pub d_inf: f64,
    pub eta: f64,
}

/// The six hypotheses, each evaluated literally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conditions {
    /// `D_θ(0) < ζ < ξ < π`
    pub order: bool,
    /// `d_∞ < min(π/2, d_θ(0))`
    pub d_inf_ok: bool,
    /// `η > max(1/sin ξ, 1/cos(R_ω τ), 2/(1 - ζ/ξ))`
    pub eta_ok: bool,
    /// `tan(R_ω τ) < β d_∞ / ((1 + ζ/(ζ - D_θ(0))) 2(N-1) c)`
    pub tan_ok: bool,
    /// `d_∞ + R_ω τ < π/2`
    pub quarter_ok: bool,
    /// `κ > (1 + ζ/(ζ - D_θ(0)))(D(Ω) + 2κ sin(R_ω τ))(N-1) c / (2 cos(R_ω τ) β d_∞)`
    pub kappa_ok: bool,
}

impl Conditions {
    pub const NAMES: [&'static str; 6] = ["order", "d_inf_ok", "eta_ok", "tan_ok", "quarter_ok", "kappa_ok"];

    pub fn all(&self) -> bool {
        self.as_array().iter().all(|&b| b)
    }

    pub fn as_array(&self) -> [bool; 6] {
        [self.order, self.d_inf_ok, self.eta_ok, self.tan_ok, self.quarter_ok, self.kappa_ok]
    }

    pub fn named(&self) -> impl Iterator<Item = (&'static str, bool)> {
        Self::NAMES.into_iter().zip(self.as_array())
    }
}

/// Two sides of each hypothesis, kept so the search can rank near misses.
/// Each pair `(lhs, rhs)` encodes the strict inequality `lhs < rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionSides {
    pub order: [(f64, f64); 3],
    pub d_inf_ok: (f64, f64),
    pub eta_ok: (f64, f64),
    pub tan_ok: (f64, f64),
    pub quarter_ok: (f64, f64),
    pub kappa_ok: (f64, f64),
}

/// An evaluated certificate together with the instance data it depends on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrongCertificate {
    pub zeta: f64,
    pub xi: f64,
    pub d_inf: f64,
    pub eta: f64,
    pub beta: f64,
    pub c: f64,
    pub r_omega: f64,
    pub xi_star: f64,
    pub n: usize,
    pub kappa: f64,
    pub tau: f64,
    /// `D_θ(0)`: phase spread over the whole initial interval.
    pub d_theta_initial: f64,
    /// `d_θ(0)`: phase diameter at `t = 0`.
    pub d_theta_zero: f64,
    pub d_natural: f64,
    /// `q_θ(0)`, absent when `η ≤ 2`.
    pub q0: Option<f64>,
    pub conditions: Conditions,
    pub sides: ConditionSides,
    pub valid: bool,
    pub t_star: Option<f64>,
    /// Set when all six conditions hold but `β d_∞ ≤ A`.
    pub envelope_inconclusive: bool,
}

impl StrongCertificate {
    pub fn tuple(&self) -> CertificateTuple {
        CertificateTuple {
            zeta: self.zeta,
            xi: self.xi,
            d_inf: self.d_inf,
            eta: self.eta,
        }
    }

    /// `R_ω τ`.
    pub fn lag(&self) -> f64 {
        self.r_omega * self.tau
    }

    /// `1 + ζ / (ζ - D_θ(0))`.
    pub fn gain(&self) -> f64 {
        1.0 + self.zeta / (self.zeta - self.d_theta_initial)
    }

    /// Time from which the post-entry analysis is anchored: `max(t_*, τ)`.
    pub fn anchor(&self) -> Option<f64> {
        self.t_star.map(|t| t.max(self.tau))
    }
}

/// `c = (Σ_{j=1}^{N-1} η^j P(2N, j) + 1) ξ / sin ξ`.
pub fn c_constant(n: usize, eta: f64, xi: f64) -> f64 {
    let m = 2 * n as u64;
    let sum: f64 = (1..n as u64).map(|j| eta.powi(j as i32) * perm_count_f64(m, j)).sum();
    (sum + 1.0) * xi / xi.sin()
}

/// `ξ_* = cos(R_ω τ + d_∞)`.
pub fn xi_star(r_omega: f64, tau: f64, d_inf: f64) -> f64 {
    (r_omega * tau + d_inf).cos()
}

/// Evaluates every field and hypothesis. Failures are data, never errors.
pub fn evaluate_certificate(params: &SystemParams, history: &HistorySpec, tuple: CertificateTuple) -> Result<StrongCertificate> {
    let n = params.n();
    if history.n() != n {
        return Err(Error::DimensionMismatch {
            what: "history".into(),
            expected: n,
            found: history.n(),
        });
    }
    let tau = params.tau_max();
    let (d_theta_initial, _) = initial_diameters(history, tau, INITIAL_GRID)?;
    let phases0 = history.phases_at(0.0)?;
    let d_theta_zero = diameter(&phases0);
    let q0 = if tuple.eta > 2.0 {
        convex_combination(&phases0, tuple.eta).ok().map(|s| s.q)
    } else {
        None
    };
    Ok(assemble(params, tuple, d_theta_initial, d_theta_zero, q0))
}

/// Certificate evaluation from precomputed initial-data summaries.
pub(crate) fn assemble(
    params: &SystemParams,
    tuple: CertificateTuple,
    d_theta_initial: f64,
    d_theta_zero: f64,
    q0: Option<f64>,
) -> StrongCertificate {
    let CertificateTuple { zeta, xi, d_inf, eta } = tuple;
    let n = params.n();
    let nm1 = n.saturating_sub(1) as f64;
    let kappa = params.kappa();
    let tau = params.tau_max();
    let r_omega = params.r_omega();
    let lag = r_omega * tau;
    let beta = 1.0 - 2.0 / eta;
    let c = c_constant(n, eta, xi);
    let d_natural = natural_freq_diameter(params.omega());
    let gain = 1.0 + zeta / (zeta - d_theta_initial);
    let trig = lag < FRAC_PI_2;
    let gap = zeta > d_theta_initial;

    let order = [(d_theta_initial, zeta), (zeta, xi), (xi, PI)];
    let d_inf_side = (d_inf, FRAC_PI_2.min(d_theta_zero));
    let eta_side = (eta_lower_bound(zeta, xi, r_omega, tau).unwrap_or(f64::INFINITY), eta);
    let tan_side = if trig && gap {
        (lag.tan(), beta * d_inf / (gain * 2.0 * nm1 * c))
    } else {
        (f64::INFINITY, 0.0)
    };
    let quarter_side = (d_inf + lag, FRAC_PI_2);
    let kappa_side = if trig && gap {
        let rhs = gain * (d_natural + 2.0 * kappa * lag.sin()) * nm1 * c / (2.0 * lag.cos() * beta * d_inf);
        (rhs, kappa)
    } else {
        (f64::INFINITY, kappa)
    };
    let lt = |(a, b): (f64, f64)| a < b;
    let conditions = Conditions {
        order: order.iter().copied().all(lt),
        d_inf_ok: lt(d_inf_side),
        eta_ok: lt(eta_side),
        tan_ok: lt(tan_side),
        quarter_ok: lt(quarter_side),
        // a non-positive beta flips the sign of the threshold
        kappa_ok: beta > 0.0 && lt(kappa_side),
    };
    let valid = conditions.all();
    let mut cert = StrongCertificate {
        zeta,
        xi,
        d_inf,
        eta,
        beta,
        c,
        r_omega,
        xi_star: xi_star(r_omega, tau, d_inf),
        n,
        kappa,
        tau,
        d_theta_initial,
        d_theta_zero,
        d_natural,
        q0,
        conditions,
        sides: ConditionSides {
            order,
            d_inf_ok: d_inf_side,
            eta_ok: eta_side,
            tan_ok: tan_side,
            quarter_ok: quarter_side,
            kappa_ok: kappa_side,
        },
        valid,
        t_star: None,
        envelope_inconclusive: false,
    };
    if valid {
        match q0.map(|q| predict_t_star(&cert, q, d_natural, params)) {
            Some(Ok(t)) => cert.t_star = Some(t),
            _ => cert.envelope_inconclusive = true,
        }
    }
    cert
}

/// `f(t) = q₀ e^{-λt} + A (1 - e^{-λt})`, the bound on `q_θ(t)` for a valid
/// certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GronwallEnvelope {
    pub q0: f64,
    pub lambda: f64,
    pub asymptote: f64,
    /// `max(d_θ(0), A)`, a time-uniform bound.
    pub uniform_bound: f64,
}

impl GronwallEnvelope {
    pub fn value(&self, t: f64) -> f64 {
        let decay = (-self.lambda * t).exp();
        self.q0 * decay + self.asymptote * (1.0 - decay)
    }
}

/// `(λ, A)` with `λ = 2κ cos(R_ω τ) / ((N-1) c)` and
/// `A = (D(Ω) + 2κ sin(R_ω τ))(N-1) c / (2κ cos(R_ω τ))`.
pub fn envelope_constants(cert: &StrongCertificate, d_omega_nat: f64) -> (f64, f64) {
    let nm1 = cert.n.saturating_sub(1) as f64;
    let lag = cert.lag();
    let drive = 2.0 * cert.kappa * lag.cos();
    let lambda = drive / (nm1 * cert.c);
    let asymptote = (d_omega_nat + 2.0 * cert.kappa * lag.sin()) * nm1 * cert.c / drive;
    (lambda, asymptote)
}

fn require_valid(cert: &StrongCertificate) -> Result<()> {
    if cert.conditions.all() {
        Ok(())
    } else {
        Err(Error::CertificateInvalid)
    }
}

/// Smallest `t` with `f(t) ≤ β d_∞`.
pub fn predict_t_star(cert: &StrongCertificate, q0: f64, d_omega_nat: f64, _params: &SystemParams) -> Result<f64> {
    require_valid(cert)?;
    let target = cert.beta * cert.d_inf;
    if q0 <= target {
        return Ok(0.0);
    }
    let (lambda, asymptote) = envelope_constants(cert, d_omega_nat);
    if !(target > asymptote) || !(lambda > 0.0) {
        return Err(Error::EnvelopeInconclusive { target, asymptote });
    }
    Ok(((q0 - asymptote) / (target - asymptote)).ln() / lambda)
}

/// The Grönwall bound on `q_θ` for a valid certificate.
pub fn gronwall_envelope(cert: &StrongCertificate, q0: f64, params: &SystemParams) -> Result<GronwallEnvelope> {
    require_valid(cert)?;
    let (lambda, asymptote) = envelope_constants(cert, natural_freq_diameter(params.omega()));
    Ok(GronwallEnvelope {
        q0,
        lambda,
        asymptote,
        uniform_bound: cert.d_theta_zero.max(asymptote),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DigraphTopology;

    fn pair(kappa: f64, tau: f64) -> (SystemParams, HistorySpec) {
        let p = SystemParams::with_uniform_delay(vec![0.001, -0.001], kappa, tau, DigraphTopology::all_to_all(2).unwrap()).unwrap();
        (p, HistorySpec::Constant(vec![0.0, 0.3]))
    }

    const TUPLE: CertificateTuple = CertificateTuple {
        zeta: 0.5,
        xi: 1.0,
        d_inf: 0.29,
        eta: 4.2,
    };

    #[test]
    fn small_pair_is_certified() {
        let (p, h) = pair(5.0, 1e-4);
        let cert = evaluate_certificate(&p, &h, TUPLE).unwrap();
        assert!(cert.valid, "{:?}", cert.conditions);
        let t = cert.t_star.unwrap();
        assert!(t > 0.5 && t < 3.0, "t_star = {t}");
    }

    #[test]
    fn zero_coupling_fails_kappa_condition() {
        let (p, h) = pair(0.0, 1e-4);
        let cert = evaluate_certificate(&p, &h, TUPLE).unwrap();
        assert!(!cert.conditions.kappa_ok);
        assert!(!cert.valid);
        assert_eq!(cert.t_star, None);
    }

    #[test]
    fn quarter_condition_arithmetic() {
        // R_ω τ = (1 + 1) * 0.1 = 0.2
        let p = SystemParams::with_uniform_delay(vec![1.0, -1.0], 1.0, 0.1, DigraphTopology::all_to_all(2).unwrap()).unwrap();
        let h = HistorySpec::Constant(vec![0.0, 0.3]);
        let cert = evaluate_certificate(&p, &h, CertificateTuple { d_inf: 1.5, ..TUPLE }).unwrap();
        assert!((cert.lag() - 0.2).abs() < 1e-15);
        assert!(!cert.conditions.quarter_ok);
    }

    #[test]
    fn trig_conditions_fail_beyond_quarter_lag() {
        let (p, h) = pair(5.0, 1.0);
        let cert = evaluate_certificate(&p, &h, TUPLE).unwrap();
        assert!(!cert.conditions.eta_ok && !cert.conditions.tan_ok && !cert.conditions.kappa_ok);
    }

    #[test]
    fn structural_bounds() {
        for n in 1..8 {
            for xi in [0.1, 1.0, 2.5, 3.1] {
                let c = c_constant(n, 3.0, xi);
                assert!(c >= xi / xi.sin() && xi / xi.sin() >= 1.0);
            }
        }
    }

    #[test]
    fn t_star_closed_form_cases() {
        let (p, h) = pair(5.0, 1e-4);
        let cert = evaluate_certificate(&p, &h, TUPLE).unwrap();
        let target = cert.beta * cert.d_inf;
        assert_eq!(predict_t_star(&cert, 0.5 * target, cert.d_natural, &p).unwrap(), 0.0);

        let env = gronwall_envelope(&cert, cert.q0.unwrap(), &p).unwrap();
        assert_eq!(env.value(0.0), cert.q0.unwrap());
        assert!((env.value(1e6) - env.asymptote).abs() < 1e-15);
        let t = cert.t_star.unwrap();
        assert!((env.value(t) - target).abs() < 1e-12);

        let invalid = evaluate_certificate(&pair(0.0, 1e-4).0, &h, TUPLE).unwrap();
        assert!(matches!(predict_t_star(&invalid, 1.0, 0.0, &p), Err(Error::CertificateInvalid)));
    }
}
