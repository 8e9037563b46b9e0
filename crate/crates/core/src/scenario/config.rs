//! JSON run configuration.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::reference::STANDARDIZED_DELAYS;
use crate::certificates::{CertificateTuple, GridSpec};
use crate::error::{Error, Result};
use crate::graph::DigraphTopology;
use crate::integrator::IntegrationConfig;
use crate::model::{HistorySpec, SampledHistory, SystemParams};

pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_T_END: f64 = 200.0;
pub const DEFAULT_SYNC_TOL: f64 = 1e-6;
pub const DEFAULT_SYNC_WINDOW: f64 = 10.0;
pub const MAX_SAMPLES: usize = 20_000;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    topology: TopologySpec,
    omega: OmegaSpec,
    kappa: f64,
    delays: DelaySpec,
    history: HistoryInput,
    #[serde(default)]
    integration: IntegrationInput,
    #[serde(default)]
    diagnostics: DiagnosticsInput,
    #[serde(default)]
    certificate: Option<CertificateInput>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum TopologySpec {
    Named(TopologyName),
    Matrix { matrix: Vec<Vec<u8>> },
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum TopologyName {
    AllToAll,
    Ring,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OmegaSpec {
    Explicit(Vec<f64>),
    Seeded {
        seed: u64,
        n: usize,
        #[serde(default = "unit")]
        half_width: f64,
    },
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DelaySpec {
    Matrix(Vec<Vec<f64>>),
    Scaled { standardized: bool, scale: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum HistoryInput {
    Constant(Vec<f64>),
    Tagged(TaggedHistory),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum TaggedHistory {
    Constant(Vec<f64>),
    Sampled {
        times: Vec<f64>,
        phases: Vec<Vec<f64>>,
        derivs: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegrationInput {
    t_end: Option<f64>,
    dt: Option<f64>,
    sample_stride: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagnosticsInput {
    eta: Option<f64>,
    sync_tol: Option<f64>,
    sync_window: Option<f64>,
    fit_from: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CertificateInput {
    Keyword(SearchKeyword),
    Search { search: GridSpec },
    Tuple(CertificateTuple),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum SearchKeyword {
    Search,
}

/// Diagnostics options of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsConfig {
    /// Enables the `q_θ` series.
    pub eta: Option<f64>,
    pub sync_tol: f64,
    /// Length of the trailing window used by the synchronization verdict.
    pub sync_window: f64,
    /// Start of the decay fit; defaults to 0.
    pub fit_from: Option<f64>,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            eta: None,
            sync_tol: DEFAULT_SYNC_TOL,
            sync_window: DEFAULT_SYNC_WINDOW,
            fit_from: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateRequest {
    Tuple(CertificateTuple),
    Search(GridSpec),
}

/// A validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub history: HistorySpec,
    pub integration: IntegrationConfig,
    pub diagnostics: DiagnosticsConfig,
    pub certificate: Option<CertificateRequest>,
}

impl RunConfig {
    /// A configuration with default diagnostics and a sample stride keeping
    /// at most `MAX_SAMPLES` rows.
    pub fn new(params: SystemParams, history: HistorySpec, t_end: f64, dt: f64) -> Result<Self> {
        let integration = IntegrationConfig::new(t_end, dt);
        let stride = default_stride(&params, &integration)?;
        Self::with_integration(params, history, integration.with_stride(stride))
    }

    pub fn with_integration(params: SystemParams, history: HistorySpec, integration: IntegrationConfig) -> Result<Self> {
        if history.n() != params.n() {
            return Err(Error::DimensionMismatch {
                what: "history".into(),
                expected: params.n(),
                found: history.n(),
            });
        }
        integration.effective_step(&params)?;
        Ok(Self {
            params,
            history,
            integration,
            diagnostics: DiagnosticsConfig::default(),
            certificate: None,
        })
    }
}

/// Smallest stride with at most `MAX_SAMPLES` retained grid points.
pub fn default_stride(params: &SystemParams, integration: &IntegrationConfig) -> Result<usize> {
    let (_, steps) = integration.effective_step(params)?;
    Ok(steps.div_ceil(MAX_SAMPLES - 1).max(1))
}

/// Reads and validates a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path)
}

/// Parses configuration text; `origin` only labels error messages.
pub fn parse_config(text: &str, origin: &Path) -> Result<RunConfig> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        message: format!("line {}, column {}: {}", e.line(), e.column(), e),
    })?;
    resolve(file)
}

fn resolve(file: ConfigFile) -> Result<RunConfig> {
    let omega = match file.omega {
        OmegaSpec::Explicit(v) => v,
        OmegaSpec::Seeded { seed, n, half_width } => {
            if !(half_width.is_finite() && half_width >= 0.0) {
                return Err(Error::NegativeValue {
                    what: "omega.half_width".into(),
                    value: half_width,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| rng.gen_range(-half_width..=half_width)).collect()
        }
    };
    let n = omega.len();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }

    let topology = match file.topology {
        TopologySpec::Named(TopologyName::AllToAll) => DigraphTopology::all_to_all(n)?,
        TopologySpec::Named(TopologyName::Ring) => DigraphTopology::ring(n)?,
        TopologySpec::Matrix { matrix } => {
            if matrix.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "topology matrix".into(),
                    expected: n,
                    found: matrix.len(),
                });
            }
            DigraphTopology::from_adjacency(&matrix)?
        }
    };

    let delays = match file.delays {
        DelaySpec::Matrix(m) => m,
        DelaySpec::Scaled { standardized, scale } => {
            if !(scale.is_finite() && scale >= 0.0) {
                return Err(Error::NegativeValue {
                    what: "delays.scale".into(),
                    value: scale,
                });
            }
            if standardized {
                standardized_delays(n, scale)?
            } else {
                uniform_delays(n, scale)
            }
        }
    };

    let history = match file.history {
        HistoryInput::Constant(v) | HistoryInput::Tagged(TaggedHistory::Constant(v)) => HistorySpec::Constant(v),
        HistoryInput::Tagged(TaggedHistory::Sampled { times, phases, derivs }) => {
            HistorySpec::Sampled(SampledHistory::new(times, phases, derivs)?)
        }
    };
    if history.n() != n {
        return Err(Error::DimensionMismatch {
            what: "history".into(),
            expected: n,
            found: history.n(),
        });
    }

    let params = SystemParams::new(omega, file.kappa, delays, topology)?;
    if !history.covers(params.tau_max()) {
        return Err(Error::invalid("history", format!("samples must cover [-{}, 0]", params.tau_max())));
    }

    let t_end = file.integration.t_end.unwrap_or(DEFAULT_T_END);
    let dt = file.integration.dt.unwrap_or(DEFAULT_DT);
    let integration = IntegrationConfig::new(t_end, dt);
    let stride = match file.integration.sample_stride {
        Some(s) => s,
        None => default_stride(&params, &integration)?,
    };
    let mut config = RunConfig::with_integration(params, history, integration.with_stride(stride))?;

    let d = file.diagnostics;
    for (what, value) in [("diagnostics.sync_tol", d.sync_tol), ("diagnostics.sync_window", d.sync_window)] {
        if let Some(v) = value {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::NegativeValue {
                    what: what.into(),
                    value: v,
                });
            }
        }
    }
    if let Some(eta) = d.eta {
        if !(eta > 2.0) {
            return Err(Error::EtaTooSmall(eta));
        }
    }
    config.diagnostics = DiagnosticsConfig {
        eta: d.eta,
        sync_tol: d.sync_tol.unwrap_or(DEFAULT_SYNC_TOL),
        sync_window: d.sync_window.unwrap_or(DEFAULT_SYNC_WINDOW),
        fit_from: d.fit_from,
    };
    config.certificate = file.certificate.map(|c| match c {
        CertificateInput::Keyword(SearchKeyword::Search) => CertificateRequest::Search(GridSpec::default()),
        CertificateInput::Search { search } => CertificateRequest::Search(search),
        CertificateInput::Tuple(t) => CertificateRequest::Tuple(t),
    });
    Ok(config)
}

/// The standardized delay table scaled by `scale`.
pub fn standardized_delays(n: usize, scale: f64) -> Result<Vec<Vec<f64>>> {
    if n != STANDARDIZED_DELAYS.len() {
        return Err(Error::DimensionMismatch {
            what: "standardized delays".into(),
            expected: STANDARDIZED_DELAYS.len(),
            found: n,
        });
    }
    Ok(STANDARDIZED_DELAYS
        .iter()
        .map(|row| row.iter().map(|&d| d * scale).collect())
        .collect())
}

/// The same delay on every off-diagonal entry.
pub fn uniform_delays(n: usize, value: f64) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { value }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        parse_config(text, Path::new("inline.json"))
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse(
            r#"{"topology": "all_to_all", "omega": [0.1, -0.1, 0.3], "kappa": 2,
                "delays": {"standardized": false, "scale": 0}, "history": [0, 0.5, 1]}"#,
        )
        .unwrap();
        assert_eq!(cfg.integration.dt, DEFAULT_DT);
        assert_eq!(cfg.integration.t_end, DEFAULT_T_END);
        assert_eq!(cfg.diagnostics.sync_tol, DEFAULT_SYNC_TOL);
        assert_eq!(cfg.integration.sample_stride, 2);
        assert_eq!(cfg.params.n(), 3);
        assert!(cfg.certificate.is_none());
    }

    #[test]
    fn mismatched_history_is_rejected() {
        let omega = ["0.1"; 10].join(",");
        let history = ["0"; 9].join(",");
        let text = format!(
            r#"{{"topology": "ring", "omega": [{omega}], "kappa": 2,
                "delays": {{"standardized": true, "scale": 1}}, "history": [{history}]}}"#
        );
        assert!(matches!(parse(&text), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn standardized_scale_five() {
        let omega = ["0.1"; 10].join(",");
        let text = format!(
            r#"{{"topology": "all_to_all", "omega": [{omega}], "kappa": 2,
                "delays": {{"standardized": true, "scale": 5}}, "history": {{"constant": [{omega}]}}}}"#
        );
        let cfg = parse(&text).unwrap();
        assert!((cfg.params.tau_max() - 4.91).abs() < 1e-12);
    }

    #[test]
    fn negative_scale_and_parse_errors() {
        let err = parse(
            r#"{"topology": "ring", "omega": [0, 1], "kappa": 1,
                "delays": {"standardized": false, "scale": -1}, "history": [0, 0]}"#,
        );
        assert!(matches!(err, Err(Error::NegativeValue { .. })));
        let err = parse("{\n  \"topology\": \"ring\",\n  oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn certificate_forms() {
        let base = r#""topology": "all_to_all", "omega": [0.001, -0.001], "kappa": 5,
                "delays": {"standardized": false, "scale": 0.0001}, "history": [0, 0.3]"#;
        let cfg = parse(&format!(r#"{{{base}, "certificate": "search"}}"#)).unwrap();
        assert!(matches!(cfg.certificate, Some(CertificateRequest::Search(_))));
        let cfg = parse(&format!(
            r#"{{{base}, "certificate": {{"zeta": 0.5, "xi": 1, "d_inf": 0.29, "eta": 4.2}}}}"#
        ))
        .unwrap();
        assert!(matches!(cfg.certificate, Some(CertificateRequest::Tuple(_))));
        let cfg = parse(&format!(r#"{{{base}, "certificate": {{"search": {{"eta_points": 4}}}}}}"#)).unwrap();
        match cfg.certificate {
            Some(CertificateRequest::Search(g)) => assert_eq!(g.eta_points, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn seeded_omega_is_reproducible() {
        let text = r#"{"topology": "ring", "omega": {"seed": 7, "n": 4, "half_width": 0.5}, "kappa": 1,
                "delays": {"standardized": false, "scale": 0}, "history": [0, 0, 0, 0]}"#;
        let a = parse(text).unwrap();
        let b = parse(text).unwrap();
        assert_eq!(a.params.omega(), b.params.omega());
        assert!(a.params.omega().iter().all(|w| w.abs() <= 0.5));
    }
}
