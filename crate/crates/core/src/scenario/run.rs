//! One configured run: integrate, diagnose, and analyse.

use serde::Serialize;

use super::config::{CertificateRequest, RunConfig};
use crate::certificates::{
    all_to_all_rate, contraction_ladder, evaluate_certificate, fit_decay_rate, gronwall_envelope, search_certificate, sync_detect,
    windowed_diameters, AllToAllRate, DecayFit, GronwallEnvelope, SearchOutcome, StrongCertificate, SyncReport,
};
use crate::diagnostics::{diagnostics_over, DiagnosticsSeries};
use crate::error::Result;
use crate::graph::analyze_connectivity;
use crate::integrator::{integrate, Trajectory};

/// Summary of the ladder comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderSummary {
    pub gamma_depth: usize,
    pub anchor: f64,
    pub c_shift: f64,
    pub windows: usize,
    pub first_d: f64,
    pub last_d: f64,
    pub last_predicted: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateSection {
    pub certificate: StrongCertificate,
    pub search: Option<SearchSummary>,
    pub envelope: Option<GronwallEnvelope>,
    pub ladder: Option<LadderSummary>,
    pub rate: Option<AllToAllRate>,
    /// Analyses that were skipped, with the reason.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchSummary {
    pub found: bool,
    pub score: f64,
    pub binding: Option<String>,
    pub violated: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub label: String,
    pub n: usize,
    pub kappa: f64,
    pub tau_max: f64,
    pub r_omega: f64,
    pub strongly_connected: bool,
    pub depth: Option<usize>,
    pub t_end: f64,
    pub step: f64,
    pub steps: usize,
    pub samples: usize,
    pub d_natural: f64,
    pub final_d_theta: f64,
    pub final_d_omega: f64,
    pub final_order_param: f64,
    pub sync_tol: f64,
    pub sync: SyncReport,
    pub decay_fit: Option<DecayFit>,
    pub decay_fit_note: Option<String>,
    pub certificate: Option<CertificateSection>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    pub series: DiagnosticsSeries,
    pub report: RunReport,
}

/// Integrates the configuration and assembles every requested analysis.
/// Identical configurations give identical outputs.
pub fn run(config: &RunConfig, label: &str) -> Result<RunOutput> {
    let trajectory = integrate(&config.params, &config.history, &config.integration)?;
    let series = diagnostics_over(&trajectory, config.diagnostics.eta)?;
    let connectivity = analyze_connectivity(config.params.topology());
    let sync = sync_detect(&series, config.diagnostics.sync_tol, config.diagnostics.sync_window);
    let t_end = trajectory.t_end();
    let (decay_fit, decay_fit_note) = match fit_decay_rate(&series, config.diagnostics.fit_from.unwrap_or(0.0)) {
        Ok(fit) => (Some(fit), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let certificate = config
        .certificate
        .map(|request| certificate_section(config, request, Some(&trajectory)))
        .transpose()?;
    let last = series.len() - 1;
    let report = RunReport {
        label: label.to_string(),
        n: config.params.n(),
        kappa: config.params.kappa(),
        tau_max: config.params.tau_max(),
        r_omega: config.params.r_omega(),
        strongly_connected: connectivity.strongly_connected,
        depth: connectivity.depth,
        t_end,
        step: trajectory.step(),
        steps: trajectory.grid_len() - 1,
        samples: series.len(),
        d_natural: series.d_natural,
        final_d_theta: series.d_theta[last],
        final_d_omega: series.d_omega[last],
        final_order_param: series.order_param[last],
        sync_tol: config.diagnostics.sync_tol,
        sync,
        decay_fit,
        decay_fit_note,
        certificate,
    };
    Ok(RunOutput {
        trajectory,
        series,
        report,
    })
}

/// Evaluates or searches a certificate. Trajectory-based analyses (ladder,
/// all-to-all rate) are added when a trajectory is supplied.
pub fn certificate_section(config: &RunConfig, request: CertificateRequest, traj: Option<&Trajectory>) -> Result<CertificateSection> {
    let (certificate, search) = match request {
        CertificateRequest::Tuple(t) => (evaluate_certificate(&config.params, &config.history, t)?, None),
        CertificateRequest::Search(grid) => {
            let outcome = search_certificate(&config.params, &config.history, &grid)?;
            let summary = match &outcome {
                SearchOutcome::Found { score, .. } => SearchSummary {
                    found: true,
                    score: *score,
                    binding: None,
                    violated: Vec::new(),
                },
                SearchOutcome::NotFound {
                    score, binding, violated, ..
                } => SearchSummary {
                    found: false,
                    score: *score,
                    binding: Some(binding.clone()),
                    violated: violated.clone(),
                },
            };
            (outcome.certificate().clone(), Some(summary))
        }
    };
    let mut section = CertificateSection {
        certificate,
        search,
        envelope: None,
        ladder: None,
        rate: None,
        notes: Vec::new(),
    };
    let cert = &section.certificate;
    if !cert.valid {
        section.notes.push("certificate invalid; envelopes not computed".into());
        return Ok(section);
    }
    if let Some(q0) = cert.q0 {
        section.envelope = Some(gronwall_envelope(cert, q0, &config.params)?);
    }
    if cert.t_star.is_none() {
        section.notes.push("envelope inconclusive; post-entry analysis skipped".into());
        return Ok(section);
    }
    let Some(traj) = traj else {
        return Ok(section);
    };
    let depth = analyze_connectivity(config.params.topology()).depth;
    match depth.map(|d| contraction_ladder(cert, traj, d)) {
        Some(Ok(ladder)) => {
            let first = &ladder.steps[0];
            let last = ladder.steps.last().unwrap_or(first);
            section.ladder = Some(LadderSummary {
                gamma_depth: ladder.gamma_depth,
                anchor: ladder.anchor,
                c_shift: ladder.c_shift,
                windows: ladder.steps.len(),
                first_d: first.d_n,
                last_d: last.d_n,
                last_predicted: last.predicted,
                violations: ladder.violations().len(),
            });
        }
        Some(Err(e)) => section.notes.push(format!("contraction ladder: {e}")),
        None => section.notes.push("contraction ladder: topology is not strongly connected".into()),
    }
    let tau = config.params.tau_max();
    let rate = cert
        .anchor()
        .ok_or(crate::Error::CertificateInvalid)
        .and_then(|anchor| windowed_diameters(traj, anchor, tau, 0))
        .and_then(|w| all_to_all_rate(cert, &config.params, w.d_omega_star[0]));
    match rate {
        Ok(r) => section.rate = Some(r),
        Err(e) => section.notes.push(format!("all-to-all rate: {e}")),
    }
    Ok(section)
}
