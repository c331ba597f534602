//! The `exterior` subcommand: the solution family outside a ball.
//!
//! Solves the boundary problem for every requested family parameter, writes
//! one downsampled `member_lambda_<lambda>.csv` per member, and a
//! `family.json` summary with convergence, decay evidence, and pairwise
//! separation certificates.

use std::path::PathBuf;

use clap::Args as ClapArgs;
use serde::{Deserialize, Serialize};
use slowdecay::exterior::{continuum_family, BetaMinusEvidence, PairCertificate};
use slowdecay::heteroclinic::shoot_heteroclinic;
use slowdecay::Params;

use crate::config::Config;
use crate::{emit, Failure};

/// An `f64` that serializes infinities as `"inf"` / `"-inf"`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExtReal(#[serde(with = "slowdecay::extreal")] pub f64);

/// Problem description accepted via `--problem`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExteriorJob {
    pub n: u32,
    pub nu: f64,
    pub p: f64,
    #[serde(default = "default_r_k")]
    pub r_k: f64,
    #[serde(default)]
    pub psi: f64,
    pub lambdas: Vec<ExtReal>,
}

fn default_r_k() -> f64 {
    1.0
}

/// Per-member convergence and decay evidence.
#[derive(Debug, Serialize, Deserialize)]
pub struct MemberSummary {
    #[serde(with = "slowdecay::extreal")]
    pub lambda: f64,
    pub iterations: usize,
    pub final_delta: f64,
    pub residual_sup: f64,
    pub evidence: BetaMinusEvidence,
}

/// The `family.json` schema.
#[derive(Debug, Serialize, Deserialize)]
pub struct FamilySummary {
    pub n: u32,
    pub nu: f64,
    pub p: f64,
    pub r_k: f64,
    pub psi: f64,
    /// Threshold parameter below which the boundary data cannot be matched.
    pub lambda_psi: f64,
    pub members: Vec<MemberSummary>,
    pub distinctness: Vec<PairCertificate>,
}

#[derive(ClapArgs)]
pub struct Args {
    /// Spatial dimension (N >= 3)
    #[arg(long = "N", alias = "n", conflicts_with = "problem", required_unless_present = "problem")]
    n: Option<u32>,
    /// Hardy index (nu > 0)
    #[arg(long, conflicts_with = "problem", required_unless_present = "problem")]
    nu: Option<f64>,
    /// Nonlinearity exponent, inside the slow-decay window
    #[arg(long, conflicts_with = "problem", required_unless_present = "problem")]
    p: Option<f64>,
    /// Inner radius of the exterior domain
    #[arg(long, default_value_t = 1.0, conflicts_with = "problem")]
    r_k: f64,
    /// Boundary value on the inner sphere
    #[arg(long, default_value_t = 0.0, conflicts_with = "problem")]
    psi: f64,
    /// Comma-separated family parameters; `inf` allowed (default 1,2,4,inf)
    #[arg(long, value_delimiter = ',', conflicts_with = "problem")]
    lambdas: Option<Vec<f64>>,
    /// Problem description JSON (alternative to the flags)
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Output directory for member CSVs and family.json
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// JSON file overriding solver and exterior options
    #[arg(long)]
    config: Option<PathBuf>,
    /// Cap on rows per member CSV (evenly downsampled; 0 keeps every node)
    #[arg(long, default_value_t = 5001)]
    max_csv_rows: usize,
}

fn job_from_args(args: &Args) -> Result<ExteriorJob, Failure> {
    if let Some(path) = &args.problem {
        let text = std::fs::read_to_string(path)?;
        return serde_json::from_str(&text)
            .map_err(|e| Failure::invalid(format!("problem {}: {e}", path.display())));
    }
    let lambdas = args
        .lambdas
        .clone()
        .unwrap_or_else(|| vec![1.0, 2.0, 4.0, f64::INFINITY]);
    Ok(ExteriorJob {
        n: args.n.expect("clap enforces presence"),
        nu: args.nu.expect("clap enforces presence"),
        p: args.p.expect("clap enforces presence"),
        r_k: args.r_k,
        psi: args.psi,
        lambdas: lambdas.into_iter().map(ExtReal).collect(),
    })
}

pub fn run(args: &Args) -> Result<i32, Failure> {
    let job = job_from_args(args)?;
    let mut lambdas: Vec<f64> = job.lambdas.iter().map(|w| w.0).collect();
    if lambdas.is_empty() {
        return Err(Failure::invalid("at least one lambda is required"));
    }
    if lambdas.iter().any(|l| l.is_nan() || *l <= 0.0) {
        return Err(Failure::invalid("lambdas must be positive (or inf)"));
    }
    lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    lambdas.dedup();

    let cfg = Config::load(args.config.as_deref())?;
    let params = Params::new(job.n, job.nu, job.p)?;
    let traj = shoot_heteroclinic(&params, &cfg.solver_options())?;
    let family = continuum_family(
        &traj,
        &params,
        job.r_k,
        job.psi,
        &lambdas,
        &cfg.exterior_options(),
    )?;

    std::fs::create_dir_all(&args.out)?;
    let slow_rate = params.slow_rate();
    let mut members = Vec::with_capacity(family.members.len());
    for member in &family.members {
        let profile = &member.report.solution;
        let stride = if args.max_csv_rows == 0 {
            1
        } else {
            profile.len().div_ceil(args.max_csv_rows)
        };
        let name = format!("member_lambda_{}.csv", emit::float(member.lambda));
        emit::write_profile_csv(&args.out.join(name), profile, slow_rate, stride)?;
        members.push(MemberSummary {
            lambda: member.lambda,
            iterations: member.report.iterations,
            final_delta: member.report.final_delta,
            residual_sup: member.report.residual_sup,
            evidence: member.evidence,
        });
    }

    let summary = FamilySummary {
        n: job.n,
        nu: job.nu,
        p: job.p,
        r_k: job.r_k,
        psi: job.psi,
        lambda_psi: family.lambda_psi,
        members,
        distinctness: family.distinctness.clone(),
    };
    let json_path = args.out.join("family.json");
    std::fs::write(&json_path, emit::to_json(&summary)? + "\n")?;
    eprintln!(
        "wrote {} members and {} (lambda_psi = {})",
        family.members.len(),
        json_path.display(),
        emit::float(family.lambda_psi)
    );
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_lists_round_trip_with_infinities() {
        let job: ExteriorJob = serde_json::from_str(
            r#"{"n": 15, "nu": 6.5, "p": 3.0, "lambdas": [1.0, "inf"]}"#,
        )
        .unwrap();
        assert_eq!(job.r_k, 1.0);
        assert_eq!(job.psi, 0.0);
        assert_eq!(job.lambdas[0].0, 1.0);
        assert!(job.lambdas[1].0.is_infinite());

        let text = serde_json::to_string(&job).unwrap();
        let back: ExteriorJob = serde_json::from_str(&text).unwrap();
        assert!(back.lambdas[1].0.is_infinite());
    }
}
