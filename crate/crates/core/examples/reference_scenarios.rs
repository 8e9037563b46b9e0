//! Runs the five ten-oscillator reference scenarios and prints their verdicts.
//!
//! cargo run --release --example reference_scenarios

use delayed_kuramoto::certificates::{fit_decay_rate, sync_detect};
use delayed_kuramoto::scenario::{paper_scenario, run, scenario_ids};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:<14} {:>7} {:>8} {:>7} {:>10} {:>12}",
        "scenario", "kappa", "tau_max", "synced", "t_sync", "final d_w"
    );
    for id in scenario_ids() {
        let s = paper_scenario(id)?;
        let out = run(&s.config, id)?;
        let sync = sync_detect(&out.series, 1e-6, 10.0);
        println!(
            "{:<14} {:>7} {:>8.2} {:>7} {:>10} {:>12.3e}",
            id,
            s.config.params.kappa(),
            s.config.params.tau_max(),
            sync.synced,
            sync.t_sync.map_or("-".into(), |t| format!("{t:.2}")),
            out.report.final_d_omega
        );
        if id == "a2a_k2_t0" {
            let fit = fit_decay_rate(&out.series, 5.0)?;
            println!("{:<14} decay rate {:.4}, R^2 {:.5}", "", fit.rate, fit.r_squared);
        }
    }
    Ok(())
}
