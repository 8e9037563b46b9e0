//! Built-in numerical checks run by `kdl selftest`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagnostics::{check_min_index, convex_combination, diameter, eta_lower_bound};
use crate::error::Result;
use crate::graph::{analyze_connectivity, DigraphTopology};
use crate::integrator::{convergence_order, integrate, ConvergenceOrder, IntegrationConfig};
use crate::model::{HistorySpec, SystemParams};

const SEED: u64 = 0x6b646c;
const RANDOM_CASES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfTestCase {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn case(name: &'static str, outcome: Result<(bool, String)>) -> SelfTestCase {
    match outcome {
        Ok((passed, detail)) => SelfTestCase { name, passed, detail },
        Err(e) => SelfTestCase {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn order_value(o: ConvergenceOrder) -> f64 {
    match o {
        ConvergenceOrder::Observed(p) => p,
        ConvergenceOrder::Exact => f64::INFINITY,
    }
}

pub fn run_selftest() -> Vec<SelfTestCase> {
    vec![
        case("order_undelayed", order_undelayed()),
        case("order_delayed", order_delayed()),
        case("free_drift", free_drift()),
        case("two_oscillator_lock", two_oscillator_lock()),
        case("convex_sandwich", convex_sandwich()),
        case("min_index", min_index()),
    ]
}

fn order_undelayed() -> Result<(bool, String)> {
    let p = SystemParams::with_uniform_delay(vec![0.3, -0.2, 0.1, 0.5], 1.5, 0.0, DigraphTopology::all_to_all(4)?)?;
    let h = HistorySpec::Constant(vec![0.0, 1.0, 2.0, 2.5]);
    let p_obs = order_value(convergence_order(&p, &h, 5.0, 0.1)?);
    Ok(((3.7..=4.3).contains(&p_obs), format!("observed order {p_obs:.4}")))
}

fn order_delayed() -> Result<(bool, String)> {
    let p = SystemParams::with_uniform_delay(vec![0.3, -0.2, 0.1], 1.5, 0.5, DigraphTopology::ring(3)?)?;
    let h = HistorySpec::Constant(vec![0.0, 1.0, 2.0]);
    let p_obs = order_value(convergence_order(&p, &h, 4.0, 0.05)?);
    Ok((p_obs >= 2.7, format!("observed order {p_obs:.4}")))
}

fn free_drift() -> Result<(bool, String)> {
    let omega = vec![0.563, -0.839, 0.119];
    let theta0 = vec![1.0, 2.0, 3.0];
    let p = SystemParams::with_uniform_delay(omega.clone(), 0.0, 0.3, DigraphTopology::all_to_all(3)?)?;
    let traj = integrate(&p, &HistorySpec::Constant(theta0.clone()), &IntegrationConfig::new(10.0, 0.01))?;
    let end = traj.phases_at(traj.grid_len() - 1);
    let err = (0..3).map(|i| (end[i] - (theta0[i] + omega[i] * 10.0)).abs()).fold(0.0, f64::max);
    Ok((err <= 1e-10, format!("max drift error {err:.3e}")))
}

fn two_oscillator_lock() -> Result<(bool, String)> {
    let (w1, w2, kappa) = (0.4, -0.2, 1.0);
    let p = SystemParams::with_uniform_delay(vec![w1, w2], kappa, 0.0, DigraphTopology::all_to_all(2)?)?;
    let traj = integrate(&p, &HistorySpec::Constant(vec![0.0, 0.0]), &IntegrationConfig::new(60.0, 0.01))?;
    let end = traj.phases_at(traj.grid_len() - 1);
    let expected = ((w1 - w2) / (2.0 * kappa)).asin();
    let err = (end[0] - end[1] - expected).abs();
    Ok((err <= 1e-6, format!("locked difference error {err:.3e}")))
}

/// A strongly connected digraph: a shuffled Hamiltonian cycle plus random arcs.
pub(crate) fn random_strong_topology(rng: &mut impl Rng, n: usize) -> Result<DigraphTopology> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut m = vec![vec![0u8; n]; n];
    for k in 0..n {
        m[order[k]][order[(k + 1) % n]] = 1;
    }
    let p_extra = rng.gen_range(0.0..0.6);
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i != j && rng.gen_bool(p_extra) {
                *v = 1;
            }
        }
    }
    DigraphTopology::from_adjacency(&m)
}

fn convex_sandwich() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut violations = 0;
    for _ in 0..RANDOM_CASES {
        let n = rng.gen_range(2..=8);
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.5)).collect();
        let eta = rng.gen_range(2.01..40.0);
        let s = convex_combination(&phases, eta)?;
        let d = diameter(&phases);
        if !(s.beta * d <= s.q + 1e-9 && s.q <= d + 1e-9) {
            violations += 1;
        }
    }
    Ok((violations == 0, format!("{violations} violations in {RANDOM_CASES} states")))
}

fn min_index() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut violations = 0;
    for _ in 0..RANDOM_CASES {
        let n = rng.gen_range(2..=8);
        let g = random_strong_topology(&mut rng, n)?;
        debug_assert!(analyze_connectivity(&g).strongly_connected);
        let zeta = rng.gen_range(0.2..2.5);
        let xi = rng.gen_range(zeta + 0.05..std::f64::consts::PI - 0.01);
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.99 * zeta)).collect();
        let r_omega = rng.gen_range(0.1..3.0);
        let tau = rng.gen_range(0.0..0.4 / r_omega);
        let bound = eta_lower_bound(zeta, xi, r_omega, tau).unwrap_or(f64::INFINITY);
        let eta = bound * rng.gen_range(1.001..3.0);
        if !check_min_index(&phases, eta, &g, zeta, xi, r_omega, tau)?.holds {
            violations += 1;
        }
    }
    Ok((violations == 0, format!("{violations} violations in {RANDOM_CASES} instances")))
}
