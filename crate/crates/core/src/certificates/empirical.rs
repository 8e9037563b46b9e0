//! Verdicts read off simulated diagnostics.

use serde::Serialize;

use crate::diagnostics::DiagnosticsSeries;
use crate::error::{Error, Result};

/// Samples below this level are excluded from the decay fit.
const FIT_FLOOR: f64 = 1e-12;
const MIN_FIT_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SyncReport {
    pub synced: bool,
    /// First sample time after which `d_ω < tol` for the rest of the run.
    pub t_sync: Option<f64>,
}

/// Synchronized when `d_ω < tol` at every sample of the trailing window of
/// length `window`.
pub fn sync_detect(series: &DiagnosticsSeries, tol: f64, window: f64) -> SyncReport {
    let Some(&t_last) = series.times.last() else {
        return SyncReport {
            synced: false,
            t_sync: None,
        };
    };
    let below = |k: usize| series.d_omega[k] < tol;
    let first_settled = (0..series.len()).rev().take_while(|&k| below(k)).last();
    let synced = series
        .times
        .iter()
        .enumerate()
        .filter(|(_, &t)| t >= t_last - window)
        .all(|(k, _)| below(k));
    SyncReport {
        synced,
        t_sync: first_settled.map(|k| series.times[k]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    /// `-slope` of `ln d_ω` against `t`.
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub samples: usize,
}

/// Least-squares line through `(t, ln d_ω)` for `t ≥ t_from` and
/// `d_ω > 1e-12`. A flat series has `R² = 0`.
pub fn fit_decay_rate(series: &DiagnosticsSeries, t_from: f64) -> Result<DecayFit> {
    fit_log_linear(&series.times, &series.d_omega, t_from)
}

/// Log-linear fit of an arbitrary positive series.
pub fn fit_log_linear(times: &[f64], values: &[f64], t_from: f64) -> Result<DecayFit> {
    let points: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|&(&t, &v)| t >= t_from && v > FIT_FLOOR)
        .map(|(&t, &v)| (t, v.ln()))
        .collect();
    if points.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples(points.len()));
    }
    let k = points.len() as f64;
    let (mt, my) = points.iter().fold((0.0, 0.0), |(a, b), &(t, y)| (a + t / k, b + y / k));
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for &(t, y) in &points {
        stt += (t - mt) * (t - mt);
        sty += (t - mt) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = if stt > 0.0 { sty / stt } else { 0.0 };
    let r_squared = if syy > 0.0 && stt > 0.0 {
        (sty * sty / (stt * syy)).min(1.0)
    } else {
        0.0
    };
    Ok(DecayFit {
        rate: -slope,
        intercept: my - slope * mt,
        r_squared,
        samples: points.len(),
    })
}
