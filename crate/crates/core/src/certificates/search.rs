//! Grid search for a certificate tuple.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{assemble, CertificateTuple, Conditions, StrongCertificate};
use crate::diagnostics::{convex_combination, diameter, eta_lower_bound, initial_diameters, INITIAL_GRID};
use crate::error::Result;
use crate::model::{HistorySpec, SystemParams};

/// Axis resolutions. `ζ` is spread over `(D_θ(0), π)`, `ξ` over `(ζ, π)`,
/// `d_∞` over `(0, min(π/2, d_θ(0)))`, and `η` over
/// `η_min (1 + s)` with `s` log-spaced in `eta_slack`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub zeta_points: usize,
    pub xi_points: usize,
    pub d_inf_points: usize,
    pub eta_points: usize,
    pub eta_slack: (f64, f64),
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            zeta_points: 16,
            xi_points: 16,
            d_inf_points: 16,
            eta_points: 16,
            eta_slack: (1e-3, 10.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found {
        certificate: StrongCertificate,
        score: f64,
    },
    NotFound {
        best: StrongCertificate,
        score: f64,
        binding: String,
        violated: Vec<String>,
    },
}

impl SearchOutcome {
    pub fn certificate(&self) -> &StrongCertificate {
        match self {
            SearchOutcome::Found { certificate, .. } => certificate,
            SearchOutcome::NotFound { best, .. } => best,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

fn interior(points: usize) -> impl Iterator<Item = f64> + Clone {
    (1..=points).map(move |k| k as f64 / (points + 1) as f64)
}

fn margin((lhs, rhs): (f64, f64)) -> f64 {
    if lhs.is_nan() || rhs.is_nan() {
        return -1.0;
    }
    if !lhs.is_finite() || !rhs.is_finite() {
        return if lhs < rhs { 1.0 } else { -1.0 };
    }
    let scale = lhs.abs() + rhs.abs();
    if scale == 0.0 {
        0.0
    } else {
        (rhs - lhs) / scale
    }
}

/// Normalized margins in `[-1, 1]`, positive exactly when the condition holds.
fn margins(cert: &StrongCertificate) -> [f64; 6] {
    let s = &cert.sides;
    let mut kappa = margin(s.kappa_ok);
    if cert.beta <= 0.0 {
        kappa = -1.0;
    }
    [
        s.order.iter().copied().map(margin).fold(f64::INFINITY, f64::min),
        margin(s.d_inf_ok),
        margin(s.eta_ok),
        margin(s.tan_ok),
        margin(s.quarter_ok),
        kappa,
    ]
}

fn score(cert: &StrongCertificate) -> f64 {
    let m = margins(cert).into_iter().fold(f64::INFINITY, f64::min);
    if cert.valid && cert.t_star.is_none() {
        m.min(0.0)
    } else {
        m
    }
}

/// Maximizes the smallest normalized margin over the grid. Cells are scored
/// in parallel and reduced sequentially, so ties resolve to the first cell in
/// enumeration order.
pub fn search_certificate(params: &SystemParams, history: &HistorySpec, grid: &GridSpec) -> Result<SearchOutcome> {
    let tau = params.tau_max();
    let (d_theta_initial, _) = initial_diameters(history, tau, INITIAL_GRID)?;
    let phases0 = history.phases_at(0.0)?;
    let d_theta_zero = diameter(&phases0);
    let r_omega = params.r_omega();

    let mut tuples = Vec::new();
    for u in interior(grid.zeta_points) {
        let zeta = d_theta_initial + (PI - d_theta_initial) * u;
        for v in interior(grid.xi_points) {
            let xi = zeta + (PI - zeta) * v;
            for w in interior(grid.d_inf_points) {
                let d_inf = FRAC_PI_2.min(d_theta_zero) * w;
                let eta_min = eta_lower_bound(zeta, xi, r_omega, tau).unwrap_or(2.0).max(2.0);
                for k in 0..grid.eta_points.max(1) {
                    let (lo, hi) = grid.eta_slack;
                    let frac = if grid.eta_points > 1 {
                        k as f64 / (grid.eta_points - 1) as f64
                    } else {
                        0.0
                    };
                    let slack = lo * (hi / lo).powf(frac);
                    tuples.push(CertificateTuple {
                        zeta,
                        xi,
                        d_inf,
                        eta: eta_min * (1.0 + slack),
                    });
                }
            }
        }
    }

    let scores: Vec<f64> = tuples
        .par_iter()
        .map(|&tuple| {
            let q0 = convex_combination(&phases0, tuple.eta).ok().map(|s| s.q);
            score(&assemble(params, tuple, d_theta_initial, d_theta_zero, q0))
        })
        .collect();
    let mut best = 0;
    for (k, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = k;
        }
    }
    let tuple = tuples.get(best).copied().unwrap_or(CertificateTuple {
        zeta: f64::NAN,
        xi: f64::NAN,
        d_inf: f64::NAN,
        eta: f64::NAN,
    });
    let q0 = convex_combination(&phases0, tuple.eta).ok().map(|s| s.q);
    let cert = assemble(params, tuple, d_theta_initial, d_theta_zero, q0);
    let score = score(&cert);
    if cert.valid && cert.t_star.is_some() {
        return Ok(SearchOutcome::Found { certificate: cert, score });
    }
    let m = margins(&cert);
    let binding = Conditions::NAMES[(0..6).fold(0, |b, k| if m[k] < m[b] { k } else { b })].to_string();
    let mut violated: Vec<String> = cert
        .conditions
        .named()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name.to_string())
        .collect();
    if cert.envelope_inconclusive {
        violated.push("envelope_inconclusive".into());
    }
    Ok(SearchOutcome::NotFound {
        best: cert,
        score,
        binding,
        violated,
    })
}
