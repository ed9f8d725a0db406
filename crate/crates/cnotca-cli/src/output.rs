//! Deterministic CSV and PGM emission.
//!
//! Floats are printed in fixed `%.12e` form (sign, one integer digit,
//! twelve fractional digits, two-digit signed exponent) so repeated runs
//! with the same configuration produce byte-identical files. Heatmaps are
//! plain-text PGM (P2) with maxval 255, rows in ascending time and columns
//! in ascending site order.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use cnotca::density::EntropyGrid;
use cnotca::fractal::{DecaySample, PopcountSeries};

/// C-style `%.12e` formatting.
#[must_use]
pub fn format_e12(value: f64) -> String {
    let v = if value == 0.0 { 0.0 } else { value }; // normalize -0.0
    let s = format!("{v:.12e}");
    let (mantissa, exponent) = s.split_once('e').expect("exponential form");
    let (sign, digits) = match exponent.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exponent),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

/// Writes a grid as `t,site,entropy_bits` rows, sites numbered from 1.
pub fn write_grid_csv(path: &Path, grid: &EntropyGrid) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,site,entropy_bits")?;
    for t in 0..grid.n_times() {
        for site in 0..grid.n_sites() {
            writeln!(w, "{t},{},{}", site + 1, format_e12(grid.value(t, site)))?;
        }
    }
    w.flush()
}

/// Writes a grid as an ASCII PGM heatmap scaled to `grid.max_bits()`.
pub fn write_grid_pgm(path: &Path, grid: &EntropyGrid) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "P2")?;
    writeln!(w, "{} {}", grid.n_sites(), grid.n_times())?;
    writeln!(w, "255")?;
    for t in 0..grid.n_times() {
        let row: Vec<String> = grid
            .row(t)
            .iter()
            .map(|&v| {
                let scaled = (v.clamp(0.0, grid.max_bits()) / grid.max_bits() * 255.0).round();
                format!("{}", scaled as u8)
            })
            .collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    w.flush()
}

/// Writes a popcount series as `t,count,cumulative` rows.
pub fn write_series_csv(path: &Path, series: &PopcountSeries) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,count,cumulative")?;
    for t in 0..series.len() as u64 {
        writeln!(w, "{t},{},{}", series.count(t), series.cumulative(t))?;
    }
    w.flush()
}

/// Writes decay samples as `t,r,excluded` rows (excluded is 0 or 1).
pub fn write_decay_csv(path: &Path, samples: &[DecaySample]) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,r,excluded")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{}",
            s.t,
            format_e12(s.r),
            u8::from(s.excluded)
        )?;
    }
    w.flush()
}
