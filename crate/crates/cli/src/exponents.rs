//! The `exponents` subcommand: critical-exponent atlas for one (N, nu) pair.

use clap::{Args as ClapArgs, ValueEnum};
use slowdecay::atlas::{exponent_report, ExponentReport};

use crate::{emit, Failure};

/// Exponent columns shared with the sweep CSV, in fixed order.
pub const EXPONENT_COLUMNS: [&str; 9] = [
    "p_lower",
    "p_sharp",
    "p_sobolev",
    "p_minus",
    "p_plus",
    "p_upper",
    "nu_bar",
    "theta_case",
    "lemma2_case",
];

/// Cells matching [`EXPONENT_COLUMNS`].
pub fn exponent_cells(report: &ExponentReport) -> Vec<String> {
    vec![
        emit::float(report.p_lower),
        emit::float(report.p_sharp),
        emit::float(report.p_sobolev),
        emit::opt_float(report.p_minus),
        emit::opt_float(report.p_plus),
        emit::float(report.p_upper),
        emit::float(report.nu_bar),
        report.theta_case.to_string(),
        report.lemma2_case.to_string(),
    ]
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(ClapArgs)]
pub struct Args {
    /// Spatial dimension (N >= 3)
    #[arg(long = "N", alias = "n")]
    n: u32,
    /// Hardy index (nu > 0)
    #[arg(long)]
    nu: f64,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

pub fn run(args: &Args) -> Result<i32, Failure> {
    let report = exponent_report(args.n, args.nu)?;
    match args.format {
        Format::Json => println!("{}", emit::to_json(&report)?),
        Format::Csv => {
            let mut header: Vec<String> = vec!["n".into(), "nu".into()];
            header.extend(EXPONENT_COLUMNS.iter().map(|c| c.to_string()));
            let mut row = vec![args.n.to_string(), emit::float(args.nu)];
            row.extend(exponent_cells(&report));
            println!("{}", emit::line(&header));
            println!("{}", emit::line(&row));
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_align_with_the_column_list() {
        let report = exponent_report(11, 4.5).unwrap();
        let cells = exponent_cells(&report);
        assert_eq!(cells.len(), EXPONENT_COLUMNS.len());
        assert_eq!(cells[0].parse::<f64>().unwrap(), report.p_lower);
        assert_eq!(cells[3].parse::<f64>().unwrap(), report.p_minus.unwrap());
        assert_eq!(cells[8], report.lemma2_case.to_string());
    }

    #[test]
    fn infinite_upper_bound_prints_as_inf() {
        let report = exponent_report(10, 4.0).unwrap();
        assert_eq!(exponent_cells(&report)[5], "inf");
    }
}
