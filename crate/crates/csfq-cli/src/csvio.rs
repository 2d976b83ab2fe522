//! CSV ingestion and emission. All emitted numbers use nine significant
//! digits in scientific notation (`{:.8e}`), locale-independent; parse errors
//! carry the 1-based line number.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use csfq_core::synth::FluxMap;
use csfq_core::{AnticrossingPoint, SpectrumCurve};

/// Formats one value with nine significant digits.
pub fn sig9(v: f64) -> String {
    format!("{v:.8e}")
}

/// Reads a two-column `x,y` CSV trace.
pub fn read_xy(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| anyhow!("{}: empty file, expected `x,y` header", path.display()))?;
    if header.trim() != "x,y" {
        bail!(
            "{}:1: expected header `x,y`, got {:?}",
            path.display(),
            header.trim()
        );
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        let (xs, ys) = row.split_once(',').ok_or_else(|| {
            anyhow!(
                "{}:{line}: expected two comma-separated values",
                path.display()
            )
        })?;
        x.push(parse_field(xs, path, line, "x")?);
        y.push(parse_field(ys, path, line, "y")?);
    }
    Ok((x, y))
}

/// Reads a one-column `t1_us` CSV series.
pub fn read_series(path: &Path) -> Result<Vec<f64>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| anyhow!("{}: empty file, expected `t1_us` header", path.display()))?;
    if header.trim() != "t1_us" {
        bail!(
            "{}:1: expected header `t1_us`, got {:?}",
            path.display(),
            header.trim()
        );
    }
    let mut values = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        values.push(parse_field(row, path, line, "t1_us")?);
    }
    Ok(values)
}

fn parse_field(field: &str, path: &Path, line: usize, name: &str) -> Result<f64> {
    field.trim().parse().map_err(|_| {
        anyhow!(
            "{}:{line}: {name} is not a number: {:?}",
            path.display(),
            field.trim()
        )
    })
}

/// `x,y` rows from a pair of columns.
pub fn format_xy(x: &[f64], y: &[f64]) -> String {
    let mut out = String::from("x,y\n");
    for (a, b) in x.iter().zip(y) {
        let _ = writeln!(out, "{},{}", sig9(*a), sig9(*b));
    }
    out
}

/// `t1_us` rows from a value series.
pub fn format_series(values: &[f64]) -> String {
    let mut out = String::from("t1_us\n");
    for v in values {
        let _ = writeln!(out, "{}", sig9(*v));
    }
    out
}

/// `flux_frac,omega01_ghz[,omega12_ghz]` rows from a spectrum sweep.
pub fn format_spectrum(curve: &SpectrumCurve, with_omega12: bool) -> String {
    let mut out = String::new();
    if with_omega12 {
        out.push_str("flux_frac,omega01_ghz,omega12_ghz\n");
    } else {
        out.push_str("flux_frac,omega01_ghz\n");
    }
    for p in &curve.points {
        if with_omega12 {
            let _ = writeln!(
                out,
                "{},{},{}",
                sig9(p.flux_frac),
                sig9(p.omega01_ghz),
                sig9(p.omega12_ghz)
            );
        } else {
            let _ = writeln!(out, "{},{}", sig9(p.flux_frac), sig9(p.omega01_ghz));
        }
    }
    out
}

/// `flux_frac,upper_ghz,lower_ghz` rows from the dressed branches.
pub fn format_anticrossing(points: &[AnticrossingPoint]) -> String {
    let mut out = String::from("flux_frac,upper_ghz,lower_ghz\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{}",
            sig9(p.flux_frac),
            sig9(p.upper_ghz),
            sig9(p.lower_ghz)
        );
    }
    out
}

/// Long-format `flux_frac,probe_ghz,magnitude` rows, flux-major.
pub fn format_flux_map(map: &FluxMap) -> String {
    let mut out = String::from("flux_frac,probe_ghz,magnitude\n");
    for (i, f) in map.flux_frac.iter().enumerate() {
        for (j, p) in map.probe_ghz.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", sig9(*f), sig9(*p), sig9(map.at(i, j)));
        }
    }
    out
}
