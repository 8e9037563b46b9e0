//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! cargo test -p delayed-kuramoto --test acceptance

#![allow(clippy::needless_range_loop)]

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use delayed_kuramoto::certificates::{
    all_to_all_rate, c_constant, contraction_ladder, evaluate_certificate, fit_decay_rate, gamma_factor, gronwall_envelope, predict_t_star,
    rate_constants, search_certificate, sync_detect, windowed_diameters, CertificateTuple, GridSpec, SearchOutcome, StrongCertificate,
};
use delayed_kuramoto::diagnostics::{check_min_index, convex_combination, diagnostics_over};
use delayed_kuramoto::graph::{analyze_connectivity, DigraphTopology};
use delayed_kuramoto::integrator::{convergence_order, integrate, ConvergenceOrder, IntegrationConfig, Trajectory};
use delayed_kuramoto::model::{HistorySpec, SystemParams};
use delayed_kuramoto::scenario::{load_config, paper_scenario, reproduce, run, scenario_ids, RunOutput};

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

fn scenario_run(id: &str) -> Result<(RunOutput, f64), Box<dyn std::error::Error>> {
    let s = paper_scenario(id)?;
    let start = Instant::now();
    let out = run(&s.config, id)?;
    Ok((out, start.elapsed().as_secs_f64()))
}

fn d_omega_min_on(out: &RunOutput, a: f64, b: f64) -> f64 {
    out.series
        .times
        .iter()
        .zip(&out.series.d_omega)
        .filter(|(&t, _)| t >= a && t <= b)
        .map(|(_, &d)| d)
        .fold(f64::INFINITY, f64::min)
}

fn criterion_1() -> Outcome {
    let (out, secs) = scenario_run("a2a_k2_t0")?;
    let sync = sync_detect(&out.series, 1e-6, 10.0);
    let t_sync = sync.t_sync.unwrap_or(f64::INFINITY);
    let fit = fit_decay_rate(&out.series, 5.0)?;
    let ok = sync.synced && t_sync <= 100.0 && fit.r_squared > 0.99 && secs < 10.0;
    Ok((
        ok,
        format!(
            "all-to-all k=2 tau=0: synced={} t_sync={t_sync} tail R^2={:.6} rate={:.4} runtime={secs:.2}s",
            sync.synced, fit.r_squared, fit.rate
        ),
    ))
}

fn criterion_2() -> Outcome {
    let (base, _) = scenario_run("a2a_k2_t0")?;
    let (out, _) = scenario_run("a2a_k2_t5x")?;
    let t0 = sync_detect(&base.series, 1e-6, 10.0).t_sync.unwrap_or(f64::INFINITY);
    let sync = sync_detect(&out.series, 1e-6, 10.0);
    let t = sync.t_sync.unwrap_or(f64::INFINITY);
    let tau = out.trajectory.params().tau_max();
    let ok = sync.synced && t <= 200.0 && t > t0 && (tau - 4.91).abs() < 1e-12;
    Ok((
        ok,
        format!("all-to-all k=2 tau_max={tau}: synced={} t_sync={t} > {t0}", sync.synced),
    ))
}

fn criterion_3() -> Outcome {
    let (out, _) = scenario_run("ring_k2_t0")?;
    let m = d_omega_min_on(&out, 100.0, 500.0);
    Ok((m > 0.01, format!("ring k=2 tau=0: min d_omega on [100, 500] = {m:.4}")))
}

fn criterion_4() -> Outcome {
    let (base, _) = scenario_run("a2a_k2_t0")?;
    let (out, _) = scenario_run("ring_k8_t0")?;
    let t0 = sync_detect(&base.series, 1e-6, 10.0).t_sync.unwrap_or(f64::INFINITY);
    let sync = sync_detect(&out.series, 1e-6, 10.0);
    let t = sync.t_sync.unwrap_or(f64::INFINITY);
    let ok = sync.synced && t <= 500.0 && t > t0;
    Ok((ok, format!("ring k=8 tau=0: synced={} t_sync={t} > {t0}", sync.synced)))
}

fn criterion_5() -> Outcome {
    let (out, _) = scenario_run("ring_k8_t30x")?;
    let sync = sync_detect(&out.series, 1e-3, 10.0);
    let m = d_omega_min_on(&out, 0.0, 600.0);
    let ok = !sync.synced && sync.t_sync.is_none() && out.trajectory.t_end() >= 600.0;
    Ok((
        ok,
        format!(
            "ring k=8 tau_max={}: synced@1e-3={} min d_omega on [0, 600] = {m:.4}",
            out.trajectory.params().tau_max(),
            sync.synced
        ),
    ))
}

fn criterion_6() -> Outcome {
    let smooth = SystemParams::with_uniform_delay(vec![0.3, -0.2, 0.1, 0.5], 1.5, 0.0, DigraphTopology::all_to_all(4)?)?;
    let h = HistorySpec::Constant(vec![0.0, 1.0, 2.0, 2.5]);
    let p0 = match convergence_order(&smooth, &h, 5.0, 0.1)? {
        ConvergenceOrder::Observed(p) => p,
        ConvergenceOrder::Exact => f64::NAN,
    };
    let delayed = SystemParams::with_uniform_delay(vec![0.3, -0.2, 0.1], 1.5, 0.5, DigraphTopology::ring(3)?)?;
    let hd = HistorySpec::Constant(vec![0.0, 1.0, 2.0]);
    let p1 = match convergence_order(&delayed, &hd, 4.0, 0.05)? {
        ConvergenceOrder::Observed(p) => p,
        ConvergenceOrder::Exact => f64::INFINITY,
    };
    let omega = [0.563, -0.839, 0.119, 0.25];
    let theta0 = [1.0, 2.0, 3.0, -0.5];
    let free = SystemParams::with_uniform_delay(omega.to_vec(), 0.0, 0.7, DigraphTopology::all_to_all(4)?)?;
    let traj = integrate(&free, &HistorySpec::Constant(theta0.to_vec()), &IntegrationConfig::new(10.0, 0.01))?;
    let end = traj.phases_at(traj.grid_len() - 1);
    let drift = (0..4).map(|i| (end[i] - (theta0[i] + omega[i] * 10.0)).abs()).fold(0.0, f64::max);
    let ok = (3.7..=4.3).contains(&p0) && p1 >= 2.7 && drift <= 1e-10;
    Ok((
        ok,
        format!("order tau=0 {p0:.4}, order delayed {p1:.4}, free drift error {drift:.2e}"),
    ))
}

/// Classical RK4 on `φ' = ΔΩ - 2κ sin φ`, independent of the library.
fn scalar_lock(delta: f64, kappa: f64, phi0: f64, t_end: f64, h: f64) -> f64 {
    let f = |phi: f64| delta - 2.0 * kappa * phi.sin();
    let steps = (t_end / h).round() as usize;
    let mut phi = phi0;
    for _ in 0..steps {
        let k1 = f(phi);
        let k2 = f(phi + 0.5 * h * k1);
        let k3 = f(phi + 0.5 * h * k2);
        let k4 = f(phi + h * k3);
        phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    phi
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    for &(w1, w2, kappa) in &[(0.4, -0.2, 1.0), (0.9, 0.1, 0.5), (-0.3, 0.6, 2.0)] {
        let p = SystemParams::with_uniform_delay(vec![w1, w2], kappa, 0.0, DigraphTopology::all_to_all(2)?)?;
        let traj = integrate(&p, &HistorySpec::Constant(vec![0.2, 0.0]), &IntegrationConfig::new(80.0, 0.01))?;
        let end = traj.phases_at(traj.grid_len() - 1);
        let sim = end[0] - end[1];
        let ode = scalar_lock(w1 - w2, kappa, 0.2, 80.0, 0.001);
        let exact = ((w1 - w2) / (2.0 * kappa)).asin();
        worst = worst.max((sim - exact).abs()).max((ode - exact).abs());
    }
    Ok((
        worst <= 1e-6,
        format!("max |phase difference - arcsin(dOmega/(2 kappa))| = {worst:.2e}"),
    ))
}

/// Barycentre gap recomputed from the recurrences.
fn oracle_q(phases: &[f64], eta: f64) -> f64 {
    let mut s = phases.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    let mut a_bar = vec![0.0; n + 1];
    for k in (2..=n).rev() {
        a_bar[k - 1] = eta * (2 * n - k + 2) as f64 * (a_bar[k] + 1.0);
    }
    let mut top = s[n - 1];
    for k in (1..n).rev() {
        top = (a_bar[k] * top + s[k - 1]) / (a_bar[k] + 1.0);
    }
    let mut a_low = vec![0.0; n + 1];
    for k in 1..n {
        a_low[k + 1] = eta * (k + 1 + n) as f64 * (a_low[k] + 1.0);
    }
    let mut bottom = s[0];
    for k in 1..n {
        bottom = (a_low[k + 1] * bottom + s[k]) / (a_low[k + 1] + 1.0);
    }
    top - bottom
}

struct Precondition {
    zeta: f64,
    xi: f64,
    r_omega: f64,
    tau: f64,
    eta: f64,
}

fn random_precondition(rng: &mut ChaCha8Rng) -> Precondition {
    let zeta: f64 = rng.gen_range(0.1..2.8);
    let xi: f64 = rng.gen_range(zeta + 0.01..PI - 0.005);
    let r_omega: f64 = rng.gen_range(0.05..5.0);
    let tau: f64 = rng.gen_range(0.0..1.2 / r_omega);
    let bound = (1.0 / xi.sin()).max(1.0 / (r_omega * tau).cos()).max(2.0 / (1.0 - zeta / xi));
    let eta = bound * rng.gen_range(1.0001..4.0);
    Precondition {
        zeta,
        xi,
        r_omega,
        tau,
        eta,
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases = 2000;
    let mut violations = 0;
    let mut disagreements = 0;
    for _ in 0..cases {
        let n = rng.gen_range(2..=8);
        let pre = random_precondition(&mut rng);
        let offset = rng.gen_range(-3.0..3.0);
        let phases: Vec<f64> = (0..n).map(|_| offset + rng.gen_range(0.0..pre.zeta)).collect();
        let d = phases.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - phases.iter().cloned().fold(f64::INFINITY, f64::min);
        let q = oracle_q(&phases, pre.eta);
        let beta = 1.0 - 2.0 / pre.eta;
        if !(beta * d <= q + 1e-9 && q <= d + 1e-9) {
            violations += 1;
        }
        let lib = convex_combination(&phases, pre.eta)?.q;
        if (lib - q).abs() > 1e-12 * d.max(1.0) {
            disagreements += 1;
        }
    }
    Ok((
        violations == 0 && disagreements == 0,
        format!("{cases} states: {violations} sandwich violations, {disagreements} library/oracle disagreements"),
    ))
}

fn random_strong_graph(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<usize>> {
    // neighbor lists: a shuffled directed cycle plus random extra arcs
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut nbrs = vec![Vec::new(); n];
    for k in 0..n {
        nbrs[order[k]].push(order[(k + 1) % n]);
    }
    let p = rng.gen_range(0.0..0.7);
    for (i, list) in nbrs.iter_mut().enumerate() {
        for j in 0..n {
            if j != i && !list.contains(&j) && rng.gen_bool(p) {
                list.push(j);
            }
        }
    }
    nbrs
}

/// Both ordering inequalities evaluated on ranked phases.
fn oracle_min_index(phases: &[f64], nbrs: &[Vec<usize>], eta: f64) -> bool {
    let n = phases.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| phases[a].total_cmp(&phases[b]));
    let mut rank = vec![0; n];
    for (r, &i) in idx.iter().enumerate() {
        rank[i] = r;
    }
    let th: Vec<f64> = idx.iter().map(|&i| phases[i]).collect();
    let nb: Vec<Vec<usize>> = idx.iter().map(|&i| nbrs[i].iter().map(|&j| rank[j]).collect()).collect();
    for m in 0..n {
        let mut upper = 0.0;
        let mut scale: f64 = 1.0;
        for i in m..n {
            let low = nb[i]
                .iter()
                .filter(|&&j| j <= i)
                .map(|&j| (th[j] - th[i]).sin())
                .fold(0.0f64, |a, b| a.min(b));
            upper += eta.powi((i - m) as i32) * low;
            scale += eta.powi((i - m) as i32);
        }
        let k_bar = (m..n).flat_map(|i| nb[i].iter().copied()).min().expect("strongly connected");
        if upper > (th[k_bar] - th[n - 1]).sin() + 1e-12 * scale {
            return false;
        }
        let mut lower = 0.0;
        let mut scale: f64 = 1.0;
        for i in 0..=m {
            let high = nb[i]
                .iter()
                .filter(|&&j| j >= i)
                .map(|&j| (th[j] - th[i]).sin())
                .fold(0.0f64, |a, b| a.max(b));
            lower += eta.powi((m - i) as i32) * high;
            scale += eta.powi((m - i) as i32);
        }
        let k_low = (0..=m).flat_map(|i| nb[i].iter().copied()).max().expect("strongly connected");
        if lower < (th[k_low] - th[0]).sin() - 1e-12 * scale {
            return false;
        }
    }
    true
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cases = 2000;
    let (mut violations, mut disagreements) = (0, 0);
    for _ in 0..cases {
        let n = rng.gen_range(2..=8);
        let nbrs = random_strong_graph(&mut rng, n);
        let pre = random_precondition(&mut rng);
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.999 * pre.zeta)).collect();
        let holds = oracle_min_index(&phases, &nbrs, pre.eta);
        if !holds {
            violations += 1;
        }
        let rows: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| u8::from(nbrs[i].contains(&j))).collect()).collect();
        let g = DigraphTopology::from_adjacency(&rows)?;
        let report = check_min_index(&phases, pre.eta, &g, pre.zeta, pre.xi, pre.r_omega, pre.tau)?;
        if report.holds != holds {
            disagreements += 1;
        }
    }
    Ok((
        violations == 0 && disagreements == 0,
        format!("{cases} instances: {violations} violations, {disagreements} library/oracle disagreements"),
    ))
}

fn certified_instance() -> Result<(delayed_kuramoto::scenario::RunConfig, StrongCertificate), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/certified_pair.json");
    let config = load_config(path)?;
    let cert = match search_certificate(&config.params, &config.history, &GridSpec::default())? {
        SearchOutcome::Found { certificate, .. } => certificate,
        SearchOutcome::NotFound { binding, .. } => return Err(format!("no certificate, binding {binding}").into()),
    };
    Ok((config, cert))
}

fn grid_times(traj: &Trajectory) -> impl Iterator<Item = (usize, f64)> + '_ {
    (0..traj.grid_len()).map(|m| (m, traj.time(m)))
}

fn criterion_10() -> Outcome {
    let (config, cert) = certified_instance()?;
    let traj = integrate(&config.params, &config.history, &config.integration)?;
    let series = diagnostics_over(&traj, Some(cert.eta))?;
    let params = traj.params();
    let t_star = cert.t_star.ok_or("no entry time")?;
    let n = params.n();
    let spread = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min);

    let a = grid_times(&traj).all(|(m, _)| spread(traj.phases_at(m)) < cert.xi);
    let b = grid_times(&traj)
        .filter(|&(_, t)| t >= t_star)
        .all(|(m, _)| spread(traj.phases_at(m)) <= cert.d_inf + 1e-6);

    let env = gronwall_envelope(&cert, cert.q0.ok_or("no q0")?, params)?;
    let q = series.q_theta.as_ref().ok_or("no q series")?;
    let c = series.times.iter().zip(q).all(|(&t, &qt)| qt <= env.value(t) + 1e-6);

    let mut d = true;
    for (m, t) in grid_times(&traj).filter(|&(_, t)| t >= t_star) {
        let th = traj.phases_at(m);
        for i in 0..n {
            for &k in params.topology().neighbors(i) {
                let lagged = traj.phase(k, t - params.delay(i, k))?;
                if (lagged - th[i]).cos() < cert.xi_star - 1e-9 {
                    d = false;
                }
            }
        }
    }

    let depth = analyze_connectivity(params.topology()).depth.ok_or("not strongly connected")?;
    let ladder = contraction_ladder(&cert, &traj, depth)?;
    let (big_m, small_m) = (ladder.steps[0].big_m, ladder.steps[0].small_m);
    let anchor = ladder.anchor;
    let e = grid_times(&traj).all(|(m, t)| {
        (0..n).all(|i| t < anchor - params.tau_i()[i] || (traj.derivs_at(m)[i] >= small_m - 1e-9 && traj.derivs_at(m)[i] <= big_m + 1e-9))
    });
    let f = ladder.violations().is_empty() && ladder.steps.len() > 1;

    let tau = params.tau_max();
    let n_max = ((traj.t_end() - anchor) / tau).floor() as usize;
    let windows = windowed_diameters(&traj, anchor, tau, n_max)?;
    let rate = all_to_all_rate(&cert, params, windows.d_omega_star[0])?;
    let g_env = grid_times(&traj)
        .filter(|&(_, t)| t >= t_star)
        .all(|(m, t)| spread(traj.derivs_at(m)) <= rate.envelope(t) * (1.0 + 1e-6));
    let d0 = windows.d_omega_star[0];
    let g_win = (0..=n_max / 3).all(|k| windows.d_omega_star[3 * k] <= rate.c_tilde.powi(k as i32) * d0 + 1e-6);

    let all = [a, b, c, d, e, f, g_env && g_win];
    Ok((
        all.iter().all(|&x| x),
        format!(
            "certified pair (t_star={t_star:.4}, eta={:.4}): a={a} b={b} c={c} d={d} e={e} f={f} ({} windows) g={}",
            cert.eta,
            ladder.steps.len(),
            g_env && g_win
        ),
    ))
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// `c` by Horner: `Σ_{j=1}^{N-1} η^j P(2N, j) = η·2N(1 + η(2N-1)(1 + ...))`.
fn oracle_c(n: usize, eta: f64, xi: f64) -> f64 {
    let mut acc = 0.0;
    for j in (1..n).rev() {
        let factor = (2 * n - j + 1) as f64;
        acc = eta * factor * (1.0 + acc);
    }
    (1.0 + acc) * xi / xi.sin()
}

fn oracle_gamma(n: usize, xs: f64, kappa: f64, tau: f64, g: usize, sigma: f64) -> f64 {
    let nm1 = (n - 1) as f64;
    let log = g as f64 * (xs / nm1).ln() - 2.0 * kappa * g as f64 * tau
        + (g as f64 - 1.0) * (-(-kappa * tau / nm1).exp_m1()).ln()
        + (-(-kappa * sigma / nm1).exp_m1()).ln();
    log.exp()
}

fn oracle_rate(n: usize, xs: f64, kappa: f64, tau: f64) -> (f64, f64, f64) {
    let log_gap = (-2.0 * kappa * tau).min((xs / (n - 1) as f64).ln() + (-(-kappa * tau).exp_m1()).ln());
    let log_gap_tilde = log_gap - kappa * tau;
    let (gap, gap_tilde) = (log_gap.exp(), log_gap_tilde.exp());
    (1.0 - gap, 1.0 - gap_tilde, -(-gap_tilde).ln_1p() / (3.0 * tau))
}

/// Smallest root of `f(t) = β d_∞` by bisection.
fn oracle_t_star(q0: f64, lambda: f64, a: f64, target: f64) -> f64 {
    if q0 <= target {
        return 0.0;
    }
    let f = |t: f64| q0 * (-lambda * t).exp() + a * (1.0 - (-lambda * t).exp()) - target;
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn oracle_conditions(cert: &StrongCertificate) -> [bool; 6] {
    let (z, x, d, e) = (cert.zeta, cert.xi, cert.d_inf, cert.eta);
    let lag = cert.r_omega * cert.tau;
    let nm1 = (cert.n - 1) as f64;
    let beta = 1.0 - 2.0 / e;
    let c = oracle_c(cert.n, e, x);
    let trig = lag < FRAC_PI_2 && z > cert.d_theta_initial;
    let gain = 1.0 + z / (z - cert.d_theta_initial);
    [
        cert.d_theta_initial < z && z < x && x < PI,
        d < FRAC_PI_2.min(cert.d_theta_zero),
        lag < FRAC_PI_2 && e > (1.0 / x.sin()).max(1.0 / lag.cos()).max(2.0 / (1.0 - z / x)),
        trig && lag.tan() < beta * d / (gain * 2.0 * nm1 * c),
        d + lag < FRAC_PI_2,
        trig && beta > 0.0 && cert.kappa > gain * (cert.d_natural + 2.0 * cert.kappa * lag.sin()) * nm1 * c / (2.0 * lag.cos() * beta * d),
    ]
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let points = 100;
    let mut failures = Vec::new();
    let mut valid_seen = 0;
    for p in 0..points {
        let n = rng.gen_range(2..=8);
        let eta = rng.gen_range(2.05..30.0);
        let xi = rng.gen_range(0.05..3.1);
        if !rel_close(c_constant(n, eta, xi), oracle_c(n, eta, xi)) {
            failures.push(format!("c@{p}"));
        }

        let xs = rng.gen_range(0.01..1.0);
        let kappa = rng.gen_range(0.1..20.0);
        let tau = rng.gen_range(1e-4..2.0);
        let g = rng.gen_range(1..=n - 1);
        let sigma = rng.gen_range(1e-4..tau);
        if !rel_close(gamma_factor(n, xs, kappa, tau, g, sigma), oracle_gamma(n, xs, kappa, tau, g, sigma)) {
            failures.push(format!("Gamma@{p}"));
        }
        let r = rate_constants(n, xs, kappa, tau);
        let (oc, oct, og) = oracle_rate(n, xs, kappa, tau);
        if !(rel_close(r.c, oc) && rel_close(r.c_tilde, oct) && rel_close(r.gamma_rate, og)) {
            failures.push(format!("rate@{p}"));
        }

        // conditions on a random instance, and t_star on a certified pair
        let omega: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.01..0.01)).collect();
        let params = SystemParams::with_uniform_delay(omega, kappa, rng.gen_range(0.0..1e-3), DigraphTopology::all_to_all(n)?)?;
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.4)).collect();
        let history = HistorySpec::Constant(phases);
        let zeta = rng.gen_range(0.3..1.5);
        let tuple = CertificateTuple {
            zeta,
            xi: rng.gen_range(zeta..3.0),
            d_inf: rng.gen_range(0.0..0.5),
            eta,
        };
        let cert = evaluate_certificate(&params, &history, tuple)?;
        if !rel_close(cert.c, oracle_c(n, eta, tuple.xi)) || cert.conditions.as_array() != oracle_conditions(&cert) {
            failures.push(format!("conditions@{p}"));
        }

        let pair = SystemParams::with_uniform_delay(
            vec![0.001, -0.001],
            rng.gen_range(3.0..8.0),
            rng.gen_range(1e-6..1e-4),
            DigraphTopology::all_to_all(2)?,
        )?;
        let cert = evaluate_certificate(
            &pair,
            &HistorySpec::Constant(vec![0.0, 0.3]),
            CertificateTuple {
                zeta: 0.5,
                xi: 1.0,
                d_inf: rng.gen_range(0.1..0.29),
                eta: rng.gen_range(4.05..6.0),
            },
        )?;
        if cert.conditions.as_array() != oracle_conditions(&cert) {
            failures.push(format!("pair conditions@{p}"));
        }
        if cert.valid {
            valid_seen += 1;
            let q0 = rng.gen_range(0.05..2.0);
            let nm1 = 1.0;
            let lag = cert.r_omega * cert.tau;
            let c = oracle_c(2, cert.eta, cert.xi);
            let lambda = 2.0 * cert.kappa * lag.cos() / (nm1 * c);
            let a = (cert.d_natural + 2.0 * cert.kappa * lag.sin()) * nm1 * c / (2.0 * cert.kappa * lag.cos());
            let target = (1.0 - 2.0 / cert.eta) * cert.d_inf;
            let oracle = oracle_t_star(q0, lambda, a, target);
            let lib = predict_t_star(&cert, q0, cert.d_natural, &pair)?;
            if !(rel_close(lib, oracle) || (lib == 0.0 && oracle == 0.0)) {
                failures.push(format!("t_star@{p}"));
            }
        }
    }
    Ok((
        failures.is_empty() && valid_seen >= points / 2,
        format!("{points} grid points ({valid_seen} certified t_star cases): mismatches {failures:?}"),
    ))
}

fn criterion_12() -> Outcome {
    let a = tempfile::tempdir()?;
    let b = tempfile::tempdir()?;
    let mut identical = 0;
    let ids: Vec<&str> = scenario_ids().collect();
    for id in &ids {
        let (_, fa) = reproduce(id, a.path())?;
        let (_, fb) = reproduce(id, b.path())?;
        if std::fs::read(&fa.csv)? == std::fs::read(&fb.csv)? {
            identical += 1;
        }
    }
    Ok((
        identical == ids.len(),
        format!("{identical}/{} scenario CSVs byte-identical across runs", ids.len()),
    ))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 12] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let mut failed = 0;
    for (k, f) in criteria {
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {k:>2}: {} - {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {}/12 passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
