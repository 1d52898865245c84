//! On-disk artifact formats: diagnostics CSV, binary field snapshots, and
//! the JSON run summary. All floating-point text output uses 17 significant
//! digits so artifacts are reproducible byte-for-byte.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use mhd2d::analysis::DiagnosticsRecord;
use mhd2d::Field;

use crate::CliError;

/// Fixed column order of `diagnostics.csv`.
pub const CSV_HEADER: &str = "time,mass,momentum_x,momentum_y,total_energy,magnetic_mass,\
h3_a,h3_u,h3_theta,h3_m,h3_sigma,h3_g,energy_e,dissipation_d,residual_g,residual_sigma";

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_diagnostics_csv(path: &Path, rows: &[DiagnosticsRecord]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    let put = |w: &mut BufWriter<File>, line: String| {
        writeln!(w, "{line}").map_err(|e| io_err(path, e))
    };
    put(&mut w, CSV_HEADER.to_string())?;
    for r in rows {
        let cols = [
            r.time,
            r.mass,
            r.momentum[0],
            r.momentum[1],
            r.total_energy,
            r.magnetic_mass,
            r.h3_a,
            r.h3_u,
            r.h3_theta,
            r.h3_m,
            r.h3_sigma,
            r.h3_g,
            r.energy_e,
            r.dissipation_d,
            r.residual_g,
            r.residual_sigma,
        ];
        let line = cols.map(fmt).join(",");
        put(&mut w, line)?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// One field snapshot: a one-line text header `n=<n> field=<name> t=<time>`
/// followed by the grid values as little-endian f64 in row-major order.
pub fn write_snapshot(
    dir: &Path,
    index: usize,
    name: &str,
    time: f64,
    field: &Field,
) -> Result<(), CliError> {
    let path = dir.join(format!("{index:04}_{name}.bin"));
    let mut w = writer(&path)?;
    let n = field.grid().n();
    writeln!(w, "n={n} field={name} t={}", fmt(time)).map_err(|e| io_err(&path, e))?;
    for v in field.values().iter() {
        w.write_all(&v.to_le_bytes()).map_err(|e| io_err(&path, e))?;
    }
    w.flush().map_err(|e| io_err(&path, e))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable summary");
    std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

fn writer(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_err(path, e))
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Failure(format!("cannot write {}: {e}", path.display()))
}
