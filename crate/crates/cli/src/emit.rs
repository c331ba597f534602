//! CSV and JSON emission helpers with reproducible float formatting.
//!
//! Floats are written with Rust's shortest round-trip representation, so a
//! value always re-parses to the identical bits and identical inputs always
//! produce byte-identical files.  Infinities print as `inf` / `-inf`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use slowdecay::RadialProfile;

use crate::Failure;

/// Shortest round-trip rendering of one float.
pub fn float(v: f64) -> String {
    format!("{v}")
}

/// Optional float; `None` prints as the empty field.
pub fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

/// Escape one cell per RFC 4180 when it holds a delimiter, quote, or newline.
fn escape(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

/// Join cells into one CSV line, escaping where needed.
pub fn line(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| escape(c))
        .collect::<Vec<_>>()
        .join(",")
}

/// Pretty JSON for any serializable report.
pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Failure::invalid(format!("serialization: {e}")))
}

/// Write a profile as `r,u,u_scaled` rows, where the third column is
/// `u * r^{2/(p-1)}`.  `stride > 1` keeps every stride-th node plus the last.
pub fn write_profile_csv(
    path: &Path,
    profile: &RadialProfile,
    slow_rate: f64,
    stride: usize,
) -> Result<(), Failure> {
    let stride = stride.max(1);
    let n = profile.len();
    let mut rows: Vec<usize> = (0..n).step_by(stride).collect();
    if rows.last() != Some(&(n - 1)) {
        rows.push(n - 1);
    }

    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "r,u,u_scaled")?;
    for i in rows {
        let t = profile.log_r_grid[i];
        let u = profile.values[i];
        writeln!(
            out,
            "{},{},{}",
            float(t.exp()),
            float(u),
            float(u * (slow_rate * t).exp())
        )?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_and_infinities_are_named() {
        for v in [0.1 + 0.2, 1.0 / 3.0, -2.5e-13, 6.922024586816337] {
            assert_eq!(float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(float(f64::INFINITY), "inf");
        assert_eq!(opt_float(None), "");
    }

    #[test]
    fn cells_with_delimiters_are_quoted() {
        let cells = vec![
            "plain".to_string(),
            "a,b".to_string(),
            "say \"hi\"".to_string(),
        ];
        assert_eq!(line(&cells), "plain,\"a,b\",\"say \"\"hi\"\"\"");
    }
}
