//! Two coupled oscillators phase-lock at `arcsin(ΔΩ / 2κ)`.
//!
//! cargo run --release --example two_oscillators

use delayed_kuramoto::graph::DigraphTopology;
use delayed_kuramoto::integrator::{integrate, IntegrationConfig};
use delayed_kuramoto::model::{HistorySpec, SystemParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (w1, w2, kappa) = (0.4, -0.2, 1.0);
    let params = SystemParams::with_uniform_delay(vec![w1, w2], kappa, 0.0, DigraphTopology::all_to_all(2)?)?;
    let traj = integrate(&params, &HistorySpec::Constant(vec![0.5, 0.0]), &IntegrationConfig::new(60.0, 0.01))?;

    let locked = ((w1 - w2) / (2.0 * kappa)).asin();
    for t in [0.0, 5.0, 10.0, 20.0, 60.0] {
        let gap = traj.phase(0, t)? - traj.phase(1, t)?;
        println!("t = {t:>5.1}  theta_1 - theta_2 = {gap:.10}  (locked value {locked:.10})");
    }
    let f = traj.grid_frequencies(traj.grid_len() - 1);
    println!("common frequency {:.10}, expected {:.10}", f[0], 0.5 * (w1 + w2));
    Ok(())
}
