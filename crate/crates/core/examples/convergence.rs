//! Observed order of the integrator with and without delays.
//!
//! cargo run --release --example convergence

use delayed_kuramoto::graph::DigraphTopology;
use delayed_kuramoto::integrator::{convergence_order, integrate, IntegrationConfig};
use delayed_kuramoto::model::{HistorySpec, SystemParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let smooth = SystemParams::with_uniform_delay(vec![0.3, -0.2, 0.1, 0.5], 1.5, 0.0, DigraphTopology::all_to_all(4)?)?;
    let h = HistorySpec::Constant(vec![0.0, 1.0, 2.0, 2.5]);
    println!("tau = 0:   {:?}", convergence_order(&smooth, &h, 5.0, 0.1)?);

    let delayed = SystemParams::with_uniform_delay(vec![0.3, -0.2, 0.1], 1.5, 0.5, DigraphTopology::ring(3)?)?;
    let h = HistorySpec::Constant(vec![0.0, 1.0, 2.0]);
    println!("tau = 0.5: {:?}", convergence_order(&delayed, &h, 4.0, 0.05)?);

    for dt in [0.1, 0.05, 0.025] {
        let cfg = IntegrationConfig::new(4.0, dt);
        let (step, steps) = cfg.effective_step(&delayed)?;
        let traj = integrate(&delayed, &h, &cfg)?;
        println!("dt = {dt:<6} step {step:.5} x {steps}: theta_1(4) = {:.12}", traj.phase(0, 4.0)?);
    }
    Ok(())
}
