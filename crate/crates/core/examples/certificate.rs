//! Searches a certificate for a small two-oscillator instance, then compares
//! the predicted envelopes with a simulated run.
//!
//! cargo run --release --example certificate

use delayed_kuramoto::certificates::{
    all_to_all_rate, contraction_ladder, gronwall_envelope, search_certificate, windowed_diameters, GridSpec, SearchOutcome,
};
use delayed_kuramoto::diagnostics::diagnostics_over;
use delayed_kuramoto::graph::analyze_connectivity;
use delayed_kuramoto::integrator::integrate;
use delayed_kuramoto::scenario::load_config;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/certified_pair.json");
    let config = load_config(path)?;

    let outcome = search_certificate(&config.params, &config.history, &GridSpec::default())?;
    let cert = match outcome {
        SearchOutcome::Found { certificate, score } => {
            println!("found certificate, margin {score:.4}");
            certificate
        }
        SearchOutcome::NotFound { binding, .. } => {
            println!("no certificate; binding condition {binding}");
            return Ok(());
        }
    };
    println!("zeta = {}, xi = {}, d_inf = {}, eta = {}", cert.zeta, cert.xi, cert.d_inf, cert.eta);
    println!("c = {:.6}, xi_star = {:.6}, t_star = {:?}", cert.c, cert.xi_star, cert.t_star);

    let traj = integrate(&config.params, &config.history, &config.integration)?;
    let series = diagnostics_over(&traj, Some(cert.eta))?;
    let q = series.q_theta.as_ref().expect("eta was supplied");
    let env = gronwall_envelope(&cert, cert.q0.unwrap_or(q[0]), &config.params)?;
    let worst = series
        .times
        .iter()
        .zip(q)
        .map(|(&t, &qt)| qt - env.value(t))
        .fold(f64::NEG_INFINITY, f64::max);
    println!("max q_theta(t) - f(t) = {worst:.3e}");

    let depth = analyze_connectivity(config.params.topology()).depth.unwrap_or(1);
    let ladder = contraction_ladder(&cert, &traj, depth)?;
    println!(
        "ladder: {} windows, D_0 = {:.3e}, D_last = {:.3e}, violations = {}",
        ladder.steps.len(),
        ladder.steps[0].d_n,
        ladder.steps.last().map_or(0.0, |s| s.d_n),
        ladder.violations().len()
    );

    let anchor = cert.anchor().expect("valid certificate");
    let tau = config.params.tau_max();
    let windows = windowed_diameters(&traj, anchor, tau, 0)?;
    let rate = all_to_all_rate(&cert, &config.params, windows.d_omega_star[0])?;
    println!(
        "all-to-all: C = {:.6}, C_tilde = {:.6}, gamma = {:.4}",
        rate.c, rate.c_tilde, rate.gamma_rate
    );
    Ok(())
}
