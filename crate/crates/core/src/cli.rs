//! Command-line front end of the `kdl` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::certificates::{fit_log_linear, GridSpec};
use crate::error::{Error, Result};
use crate::scenario::{
    certificate_section, certificate_text, emit_plot_script, load_config, report_text, reproduce, run, run_selftest, scenario_ids,
    write_csv, CertificateRequest,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

/// Environment variable capping the number of concurrent scenario runs.
pub const THREADS_VAR: &str = "KDL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "kdl", version, about = "Delayed Kuramoto simulation and synchronization analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a configuration and print its report.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Directory for a gnuplot script (and the CSV when --csv is absent).
        #[arg(long)]
        plots: Option<PathBuf>,
    },
    /// Run a reference scenario (or `all`) and write CSV, reports and plot script.
    Reproduce {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Evaluate the configured certificate, or search for one.
    Certify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        search: bool,
    },
    /// Fit an exponential decay rate to the d_omega column of a CSV.
    Rate {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        from: f64,
    },
    /// Run the built-in convergence and invariant checks.
    Selftest,
}

/// Parses `args` (including the program name), executes, and returns the
/// process exit code. Messages go to `out` and `err`.
pub fn run_cli<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn emit(out: &mut impl Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

fn execute(command: Command, out: &mut impl Write) -> Result<i32> {
    match command {
        Command::Simulate { config, csv, plots } => {
            let cfg = load_config(&config)?;
            let label = config.file_stem().and_then(|s| s.to_str()).unwrap_or("run").to_string();
            let output = run(&cfg, &label)?;
            let csv_path = match (&csv, &plots) {
                (Some(p), _) => Some(p.clone()),
                (None, Some(dir)) => Some(dir.join(format!("{label}.csv"))),
                (None, None) => None,
            };
            if let Some(dir) = &plots {
                std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            if let Some(p) = &csv_path {
                write_csv(&output.series, &output.trajectory, p)?;
            }
            if let (Some(dir), Some(p)) = (&plots, &csv_path) {
                emit_plot_script(p, dir.join(format!("{label}.gp")))?;
            }
            emit(out, &report_text(&output.report))?;
            Ok(EXIT_OK)
        }
        Command::Reproduce { scenario, out: dir } => {
            let ids: Vec<&str> = if scenario == "all" {
                scenario_ids().collect()
            } else {
                vec![scenario.as_str()]
            };
            let results = run_scenarios(&ids, &dir)?;
            for (id, summary) in ids.iter().zip(results) {
                emit(out, &format!("{id}: {}\n", summary?))?;
            }
            Ok(EXIT_OK)
        }
        Command::Certify { config, search } => {
            let cfg = load_config(&config)?;
            let request = match (search, cfg.certificate) {
                (false, Some(request)) => request,
                (true, Some(CertificateRequest::Search(grid))) => CertificateRequest::Search(grid),
                _ => CertificateRequest::Search(GridSpec::default()),
            };
            let section = certificate_section(&cfg, request, None)?;
            emit(out, &certificate_text(&section))?;
            Ok(EXIT_OK)
        }
        Command::Rate { csv, from } => {
            let (times, d_omega) = read_decay_columns(&csv)?;
            let fit = fit_log_linear(&times, &d_omega, from)?;
            emit(
                out,
                &format!("rate: {}\nr_squared: {}\nsamples: {}\n", fit.rate, fit.r_squared, fit.samples),
            )?;
            Ok(EXIT_OK)
        }
        Command::Selftest => {
            let cases = run_selftest();
            for c in &cases {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                emit(out, &format!("{verdict} {}: {}\n", c.name, c.detail))?;
            }
            Ok(if cases.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_SELFTEST })
        }
    }
}

fn thread_cap(jobs: usize) -> usize {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&k| k > 0)
        .unwrap_or(jobs)
        .clamp(1, jobs.max(1))
}

/// Runs scenarios concurrently, at most `KDL_THREADS` at a time. Results keep
/// the input order.
fn run_scenarios(ids: &[&str], dir: &Path) -> Result<Vec<Result<String>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap(ids.len()))
        .build()
        .map_err(|e| Error::invalid(THREADS_VAR, e.to_string()))?;
    let results: Vec<Result<String>> = pool.install(|| {
        ids.par_iter()
            .map(|id| {
                let (report, files) = reproduce(id, dir)?;
                Ok(format!(
                    "synced={} t_sync={} final_d_omega={:.3e} csv={}",
                    report.sync.synced,
                    report.sync.t_sync.map_or("none".into(), |t| t.to_string()),
                    report.final_d_omega,
                    files.csv.display()
                ))
            })
            .collect()
    });
    if let Some(Err(_)) = results.iter().find(|r| r.is_err()) {
        let first = results.into_iter().find_map(|r| r.err());
        return Err(first.expect("an error is present"));
    }
    Ok(results)
}

fn read_decay_columns(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let parse_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };
    let headers = reader.headers().map_err(|e| Error::io(path, e.into()))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(format!("missing column '{name}'")))
    };
    let (ti, di) = (column("t")?, column("d_omega")?);
    let (mut times, mut values) = (Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::io(path, e.into()))?;
        let field = |k: usize| {
            record
                .get(k)
                .unwrap_or("")
                .parse::<f64>()
                .map_err(|e| parse_err(format!("row {}: {e}", line + 2)))
        };
        times.push(field(ti)?);
        values.push(field(di)?);
    }
    Ok((times, values))
}
