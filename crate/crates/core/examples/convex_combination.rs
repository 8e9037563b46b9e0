//! Barycentre chains, the gap `q` and the ordering inequalities for one
//! phase configuration on a ring.
//!
//! cargo run --example convex_combination

use delayed_kuramoto::diagnostics::{check_min_index, convex_combination, eta_lower_bound, phase_diameter};
use delayed_kuramoto::graph::DigraphTopology;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let phases = [0.35, 0.0, 0.8, 0.5, 0.15];
    let (zeta, xi, r_omega, tau) = (1.0, 1.5, 1.2, 0.1);
    let eta = 1.2 * eta_lower_bound(zeta, xi, r_omega, tau).ok_or("preconditions fail")?;

    let state = convex_combination(&phases, eta)?;
    println!("eta = {eta:.4}, beta = {:.4}", state.beta);
    println!("ranking {:?}", state.permutation);
    println!("upper coefficients {:?}", state.a_bar);
    println!("lower coefficients {:?}", state.a_under);
    println!(
        "q = {:.6}  within [{:.6}, {:.6}]",
        state.q,
        state.beta * phase_diameter(&phases),
        phase_diameter(&phases)
    );

    let ring = DigraphTopology::ring(phases.len())?;
    let report = check_min_index(&phases, eta, &ring, zeta, xi, r_omega, tau)?;
    for row in &report.rows {
        println!(
            "n = {}  upper {:+.4} <= {:+.4}  lower {:+.4} >= {:+.4}",
            row.n, row.upper_lhs, row.upper_rhs, row.lower_lhs, row.lower_rhs
        );
    }
    println!("all inequalities hold: {}", report.holds);
    Ok(())
}
