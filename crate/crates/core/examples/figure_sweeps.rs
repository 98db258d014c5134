//! Write the four standard panel sweeps as CSV files, ready for plotting.
//!
//! ```bash
//! cargo run -p contrip --example figure_sweeps -- out/
//! ```

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use contrip::experiments::{default_panel_specs, emit_sweep_csv, run_sweep};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("contrip-sweeps"));
    fs::create_dir_all(&dir)?;

    for spec in default_panel_specs() {
        let rows = run_sweep(&spec)?;
        let path = dir.join(format!("panel_{}.csv", spec.label));
        let n = emit_sweep_csv(&spec.label, &rows, BufWriter::new(File::create(&path)?))?;
        let lowest = rows
            .iter()
            .map(|r| r.breakdown.raw)
            .fold(f64::INFINITY, f64::min);
        println!(
            "panel {} ({:?}, scaling {:?}): {n} rows, lowest raw {lowest:.3} -> {}",
            spec.label,
            spec.mode,
            spec.scaling,
            path.display()
        );
    }
    Ok(())
}
