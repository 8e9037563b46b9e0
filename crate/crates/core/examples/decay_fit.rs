//! Exponential decay of the frequency diameter and its fitted rate.
//!
//! cargo run --release --example decay_fit

use delayed_kuramoto::certificates::{fit_decay_rate, sync_detect};
use delayed_kuramoto::scenario::{paper_scenario, run};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = paper_scenario("a2a_k2_t0")?;
    let out = run(&s.config, s.id)?;
    let series = &out.series;
    for t in [0.0, 2.0, 4.0, 8.0, 12.0] {
        let k = series.times.iter().position(|&x| x >= t).unwrap_or(0);
        println!("t = {:>5.2}  d_omega = {:.3e}", series.times[k], series.d_omega[k]);
    }
    for from in [0.0, 5.0] {
        let fit = fit_decay_rate(series, from)?;
        println!(
            "fit from t = {from}: rate {:.4}, R^2 {:.5}, {} samples",
            fit.rate, fit.r_squared, fit.samples
        );
    }
    println!("{:?}", sync_detect(series, 1e-6, 10.0));
    Ok(())
}
