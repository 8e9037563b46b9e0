//! The ten-oscillator reference scenarios.

use serde::Serialize;

use super::config::{standardized_delays, RunConfig, DEFAULT_DT};
use crate::error::{Error, Result};
use crate::graph::DigraphTopology;
use crate::model::{HistorySpec, SystemParams};

/// Natural frequencies: zero-centred uniform draw, three decimals.
pub const NATURAL_FREQUENCIES: [f64; 10] = [-0.563, 0.839, -0.119, 0.904, -0.493, -0.063, 0.603, 0.979, -0.101, -0.060];

/// Initial phases: uniform draw on the half circle, held constant on `[-τ, 0]`.
pub const INITIAL_PHASES: [f64; 10] = [1.714, 2.892, 2.684, 1.543, 1.081, 0.007, 2.025, 1.012, 1.228, 1.955];

/// Standardized delays, receiver-indexed (row `i` holds `τ_ij`). The
/// diagonal is listed as published and ignored by the dynamics.
pub const STANDARDIZED_DELAYS: [[f64; 10]; 10] = [
    [0.941, 0.432, 0.440, 0.953, 0.497, 0.126, 0.941, 0.501, 0.361, 0.901],
    [0.017, 0.948, 0.088, 0.075, 0.942, 0.478, 0.180, 0.982, 0.335, 0.941],
    [0.459, 0.368, 0.573, 0.911, 0.980, 0.696, 0.368, 0.864, 0.924, 0.543],
    [0.712, 0.871, 0.684, 0.650, 0.381, 0.600, 0.243, 0.120, 0.259, 0.446],
    [0.345, 0.702, 0.383, 0.505, 0.291, 0.089, 0.717, 0.224, 0.465, 0.594],
    [0.673, 0.415, 0.279, 0.893, 0.644, 0.248, 0.768, 0.537, 0.420, 0.097],
    [0.222, 0.105, 0.697, 0.748, 0.436, 0.054, 0.170, 0.945, 0.892, 0.398],
    [0.141, 0.443, 0.434, 0.020, 0.719, 0.657, 0.587, 0.807, 0.821, 0.214],
    [0.070, 0.369, 0.881, 0.776, 0.255, 0.733, 0.567, 0.276, 0.721, 0.284],
    [0.342, 0.202, 0.558, 0.448, 0.632, 0.011, 0.406, 0.038, 0.305, 0.086],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioTopology {
    AllToAll,
    Ring,
}

/// Scenario table: id, topology, coupling, delay scale, horizon.
pub const SCENARIOS: [(&str, ScenarioTopology, f64, f64, f64); 5] = [
    ("a2a_k2_t0", ScenarioTopology::AllToAll, 2.0, 0.0, 200.0),
    ("a2a_k2_t5x", ScenarioTopology::AllToAll, 2.0, 5.0, 200.0),
    ("ring_k2_t0", ScenarioTopology::Ring, 2.0, 0.0, 500.0),
    ("ring_k8_t0", ScenarioTopology::Ring, 8.0, 0.0, 500.0),
    ("ring_k8_t30x", ScenarioTopology::Ring, 8.0, 30.0, 600.0),
];

/// Ids accepted by [`paper_scenario`].
pub fn scenario_ids() -> impl Iterator<Item = &'static str> {
    SCENARIOS.iter().map(|s| s.0)
}

/// `η` used for the `q_θ` column of the reference runs.
pub const SCENARIO_ETA: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PaperScenario {
    pub id: &'static str,
    pub topology: ScenarioTopology,
    pub delay_scale: f64,
    pub config: RunConfig,
}

pub fn paper_scenario(id: &str) -> Result<PaperScenario> {
    let &(id, topology, kappa, scale, t_end) = SCENARIOS
        .iter()
        .find(|s| s.0 == id)
        .ok_or_else(|| Error::UnknownScenario(id.to_string()))?;
    let n = NATURAL_FREQUENCIES.len();
    let graph = match topology {
        ScenarioTopology::AllToAll => DigraphTopology::all_to_all(n)?,
        ScenarioTopology::Ring => DigraphTopology::ring(n)?,
    };
    let params = SystemParams::new(NATURAL_FREQUENCIES.to_vec(), kappa, standardized_delays(n, scale)?, graph)?;
    let mut config = RunConfig::new(params, HistorySpec::Constant(INITIAL_PHASES.to_vec()), t_end, DEFAULT_DT)?;
    config.diagnostics.eta = Some(SCENARIO_ETA);
    Ok(PaperScenario {
        id,
        topology,
        delay_scale: scale,
        config,
    })
}
