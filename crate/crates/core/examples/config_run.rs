//! Loads a JSON configuration, runs it, and writes the CSV, a gnuplot script
//! and the text report into a directory.
//!
//! cargo run --release --example config_run -- [config.json] [out_dir]

use std::path::PathBuf;

use delayed_kuramoto::scenario::{emit_plot_script, load_config, report_text, run, write_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let config_path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/delayed_ring.json")));
    let out_dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("kdl_config_run"));
    std::fs::create_dir_all(&out_dir)?;

    let label = config_path.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    let config = load_config(&config_path)?;
    let out = run(&config, label)?;

    let csv = out_dir.join(format!("{label}.csv"));
    write_csv(&out.series, &out.trajectory, &csv)?;
    emit_plot_script(&csv, out_dir.join(format!("{label}.gp")))?;
    print!("{}", report_text(&out.report));
    println!("wrote {}", out_dir.display());
    Ok(())
}
