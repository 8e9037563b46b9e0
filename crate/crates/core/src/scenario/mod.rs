//! Configuration, the reference scenario library, run orchestration and
//! output files.

mod config;
mod output;
mod reference;
mod run;
mod selftest;

pub use config::{
    default_stride, load_config, parse_config, standardized_delays, uniform_delays, CertificateRequest, DiagnosticsConfig, RunConfig,
    DEFAULT_DT, DEFAULT_SYNC_TOL, DEFAULT_SYNC_WINDOW, DEFAULT_T_END, MAX_SAMPLES,
};
pub use output::{certificate_text, csv_header, emit_plot_script, format_number, report_json, report_text, write_csv, write_text};
pub use reference::{
    paper_scenario, scenario_ids, PaperScenario, ScenarioTopology, INITIAL_PHASES, NATURAL_FREQUENCIES, SCENARIOS, SCENARIO_ETA,
    STANDARDIZED_DELAYS,
};
pub use run::{certificate_section, run, CertificateSection, LadderSummary, RunOutput, RunReport, SearchSummary};
pub use selftest::{run_selftest, SelfTestCase};

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Files written by [`reproduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproduceFiles {
    pub csv: PathBuf,
    pub report_text: PathBuf,
    pub report_json: PathBuf,
    pub plot_script: PathBuf,
}

/// Runs a reference scenario and writes `<id>.csv`, `<id>_report.txt`,
/// `<id>_report.json` and `<id>.gp` into `out_dir`.
pub fn reproduce(id: &str, out_dir: impl AsRef<Path>) -> Result<(RunReport, ReproduceFiles)> {
    let out_dir = out_dir.as_ref();
    let scenario = paper_scenario(id)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let output = run(&scenario.config, scenario.id)?;
    let files = ReproduceFiles {
        csv: out_dir.join(format!("{id}.csv")),
        report_text: out_dir.join(format!("{id}_report.txt")),
        report_json: out_dir.join(format!("{id}_report.json")),
        plot_script: out_dir.join(format!("{id}.gp")),
    };
    write_csv(&output.series, &output.trajectory, &files.csv)?;
    write_text(&files.report_text, &report_text(&output.report))?;
    write_text(&files.report_json, &report_json(&output.report))?;
    emit_plot_script(&files.csv, &files.plot_script)?;
    Ok((output.report, files))
}
