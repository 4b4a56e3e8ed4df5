//! CSV emission for grids and scans. Floats carry 9 significant digits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::norm_scan::NormScan;
use crate::phase::PhaseGrid;

pub const PHASE_HEADER: &str = "N,R,M,trials,threshold,success_rate";
pub const NORM_HEADER: &str = "N,trials,mean_norm,stderr";

/// Format with 9 significant digits, `%g` style: fixed notation for
/// exponents in `[-5, 9)`, scientific otherwise, trailing zeros trimmed.
pub fn fmt_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub trait CsvTable {
    fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()>;
}

impl CsvTable for PhaseGrid {
    fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{PHASE_HEADER}")?;
        let mut cells = self.cells.clone();
        cells.sort_by_key(|c| (c.r, c.m));
        for c in cells {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                self.n,
                c.r,
                c.m,
                c.trials,
                fmt_sig9(self.threshold),
                fmt_sig9(c.rate())
            )?;
        }
        Ok(())
    }
}

impl CsvTable for NormScan {
    fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{NORM_HEADER}")?;
        let mut rows = self.estimates.clone();
        rows.sort_by_key(|e| e.n);
        for e in rows {
            writeln!(
                out,
                "{},{},{},{}",
                e.n,
                self.trials,
                fmt_sig9(e.mean),
                fmt_sig9(e.stderr)
            )?;
        }
        Ok(())
    }
}

pub fn to_csv_string<T: CsvTable>(table: &T) -> String {
    let mut buf = Vec::new();
    table
        .write_csv(&mut buf)
        .expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

pub fn emit_csv<T: CsvTable>(table: &T, path: &Path) -> Result<()> {
    let io_err = |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    table.write_csv(&mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}
