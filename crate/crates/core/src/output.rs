//! CSV emission of observable series.

use std::io::Write;

use crate::error::Result;
use crate::observables::ObservableSample;

pub const CSV_HEADER: &str = "t,gamma_r,gamma_minus_beta,Z,entropy,n0,otoc,abs_ratio";

/// Formats `v` with 17 significant digits, independent of locale.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn cell(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

/// Writes `#`-prefixed comment lines, the header and one row per sample.
pub fn write_csv<W: Write>(mut w: W, comments: &[String], samples: &[ObservableSample]) -> Result<()> {
    for c in comments {
        for line in c.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    writeln!(w, "{CSV_HEADER}")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            format_float(s.t),
            cell(s.gamma_r),
            cell(s.gamma_minus_beta),
            cell(s.z),
            cell(s.entropy),
            cell(s.n0),
            cell(s.otoc),
            cell(s.abs_ratio)
        )?;
    }
    w.flush()?;
    Ok(())
}
