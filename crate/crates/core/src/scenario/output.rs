//! CSV export, plot scripts and report rendering.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::run::RunReport;
use crate::diagnostics::DiagnosticsSeries;
use crate::error::{Error, Result};
use crate::integrator::Trajectory;

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_header(n: usize) -> Vec<String> {
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("theta_{i}")));
    header.extend((1..=n).map(|i| format!("omega_{i}")));
    header.extend(["d_theta", "d_omega", "q_theta", "order_param"].map(String::from));
    header
}

/// One row per retained sample.
pub fn write_csv(series: &DiagnosticsSeries, traj: &Trajectory, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file));
    let io = |e: csv::Error| Error::io(path, e.into());
    writer.write_record(csv_header(traj.n())).map_err(io)?;
    let mut row = Vec::with_capacity(2 * traj.n() + 5);
    for (k, &m) in series.indices.iter().enumerate() {
        row.clear();
        row.push(format_number(series.times[k]));
        row.extend(traj.phases_at(m).iter().map(|&v| format_number(v)));
        row.extend(traj.grid_frequencies(m).iter().map(|&v| format_number(v)));
        row.push(format_number(series.d_theta[k]));
        row.push(format_number(series.d_omega[k]));
        row.push(series.q_theta.as_ref().map_or(String::new(), |q| format_number(q[k])));
        row.push(format_number(series.order_param[k]));
        writer.write_record(&row).map_err(io)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Writes a gnuplot script rendering `<stem>_trajectories.png` (phases and
/// frequencies) and `<stem>_diameters.png` (diameters, linear and log `d_ω`)
/// next to `out_path`.
pub fn emit_plot_script(csv_path: impl AsRef<Path>, out_path: impl AsRef<Path>) -> Result<()> {
    let csv_path = csv_path.as_ref();
    let out_path = out_path.as_ref();
    let file = File::open(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let columns = reader.headers().map_err(|e| Error::io(csv_path, e.into()))?.len();
    if columns < 7 || (columns - 5) % 2 != 0 {
        return Err(Error::Parse {
            path: csv_path.to_path_buf(),
            message: format!("unexpected column count {columns}"),
        });
    }
    let n = (columns - 5) / 2;
    let stem = csv_path.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    let dir = out_path.parent().unwrap_or(Path::new(""));
    let image = |suffix: &str| dir.join(format!("{stem}_{suffix}.png")).display().to_string();
    let csv = csv_path.display().to_string();

    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script for {csv}");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "unset key");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set terminal pngcairo size 1200,900");
    let _ = writeln!(s);
    let _ = writeln!(s, "set output '{}'", image("trajectories"));
    let _ = writeln!(s, "set multiplot layout 2,1");
    let _ = writeln!(s, "set xlabel 't'");
    let _ = writeln!(s, "set ylabel 'theta_i(t)'");
    let _ = writeln!(s, "plot for [i=2:{}] '{csv}' using 1:i with lines", n + 1);
    let _ = writeln!(s, "set ylabel 'omega_i(t)'");
    let _ = writeln!(s, "plot for [i={}:{}] '{csv}' using 1:i with lines", n + 2, 2 * n + 1);
    let _ = writeln!(s, "unset multiplot");
    let _ = writeln!(s);
    let _ = writeln!(s, "set output '{}'", image("diameters"));
    let _ = writeln!(s, "set multiplot layout 3,1");
    let _ = writeln!(s, "set ylabel 'd_theta(t)'");
    let _ = writeln!(s, "plot '{csv}' using 1:{} with lines", 2 * n + 2);
    let _ = writeln!(s, "set ylabel 'd_omega(t)'");
    let _ = writeln!(s, "plot '{csv}' using 1:{} with lines", 2 * n + 3);
    let _ = writeln!(s, "set logscale y");
    let _ = writeln!(s, "set ylabel 'd_omega(t), log scale'");
    let _ = writeln!(s, "plot '{csv}' using 1:(${c} > 0 ? ${c} : 1/0) with lines", c = 2 * n + 3);
    let _ = writeln!(s, "unset logscale y");
    let _ = writeln!(s, "unset multiplot");
    let _ = writeln!(s, "unset output");

    std::fs::write(out_path, s).map_err(|e| Error::io(out_path, e))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |x| format!("{x}"))
}

/// `key: value` rendering of a run report.
pub fn report_text(r: &RunReport) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k}: {v}");
    };
    kv("label", r.label.clone());
    kv("n", r.n.to_string());
    kv("kappa", r.kappa.to_string());
    kv("tau_max", r.tau_max.to_string());
    kv("r_omega", r.r_omega.to_string());
    kv("strongly_connected", r.strongly_connected.to_string());
    kv("depth", r.depth.map_or("none".into(), |d| d.to_string()));
    kv("t_end", r.t_end.to_string());
    kv("step", r.step.to_string());
    kv("steps", r.steps.to_string());
    kv("samples", r.samples.to_string());
    kv("d_natural", r.d_natural.to_string());
    kv("final_d_theta", r.final_d_theta.to_string());
    kv("final_d_omega", r.final_d_omega.to_string());
    kv("final_order_param", r.final_order_param.to_string());
    kv("sync_tol", r.sync_tol.to_string());
    kv("synced", r.sync.synced.to_string());
    kv("t_sync", opt(r.sync.t_sync));
    match (&r.decay_fit, &r.decay_fit_note) {
        (Some(f), _) => {
            kv("decay_rate", f.rate.to_string());
            kv("decay_r_squared", f.r_squared.to_string());
            kv("decay_samples", f.samples.to_string());
        }
        (None, Some(note)) => kv("decay_rate", format!("unavailable ({note})")),
        (None, None) => {}
    }
    if let Some(section) = &r.certificate {
        s.push_str(&certificate_text(section));
    }
    s
}

pub fn certificate_text(section: &super::run::CertificateSection) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k}: {v}");
    };
    let c = &section.certificate;
    if let Some(search) = &section.search {
        kv("search.found", search.found.to_string());
        kv("search.score", search.score.to_string());
        if let Some(b) = &search.binding {
            kv("search.binding", b.clone());
        }
        if !search.violated.is_empty() {
            kv("search.violated", search.violated.join(","));
        }
    }
    kv("certificate.zeta", c.zeta.to_string());
    kv("certificate.xi", c.xi.to_string());
    kv("certificate.d_inf", c.d_inf.to_string());
    kv("certificate.eta", c.eta.to_string());
    kv("certificate.beta", c.beta.to_string());
    kv("certificate.c", c.c.to_string());
    kv("certificate.r_omega", c.r_omega.to_string());
    kv("certificate.xi_star", c.xi_star.to_string());
    for (name, ok) in c.conditions.named() {
        kv(&format!("certificate.{name}"), ok.to_string());
    }
    kv("certificate.valid", c.valid.to_string());
    kv("certificate.envelope_inconclusive", c.envelope_inconclusive.to_string());
    kv("certificate.t_star", opt(c.t_star));
    if let Some(e) = &section.envelope {
        kv("envelope.lambda", e.lambda.to_string());
        kv("envelope.asymptote", e.asymptote.to_string());
        kv("envelope.uniform_bound", e.uniform_bound.to_string());
    }
    if let Some(l) = &section.ladder {
        kv("ladder.gamma_depth", l.gamma_depth.to_string());
        kv("ladder.anchor", l.anchor.to_string());
        kv("ladder.c_shift", l.c_shift.to_string());
        kv("ladder.windows", l.windows.to_string());
        kv("ladder.first_d", l.first_d.to_string());
        kv("ladder.last_d", l.last_d.to_string());
        kv("ladder.last_predicted", l.last_predicted.to_string());
        kv("ladder.violations", l.violations.to_string());
    }
    if let Some(rate) = &section.rate {
        kv("rate.c", rate.c.to_string());
        kv("rate.c_tilde", rate.c_tilde.to_string());
        kv("rate.gamma_rate", rate.gamma_rate.to_string());
        kv("rate.envelope_scale", rate.envelope_scale.to_string());
    }
    for note in &section.notes {
        kv("note", note.clone());
    }
    s
}

pub fn report_json(r: &RunReport) -> String {
    // every field is a plain number, string, bool or nested struct
    serde_json::to_string_pretty(r).expect("report serializes") + "\n"
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    let mut f = BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
    f.write_all(text.as_bytes()).and_then(|_| f.flush()).map_err(|e| Error::io(path, e))
}
