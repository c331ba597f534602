//! The `profile` subcommand: one family member with full diagnostics.
//!
//! Writes `profile.csv` (`r,u,u_scaled`) and `diagnostics.json` into the
//! output directory.

use std::path::PathBuf;

use clap::Args as ClapArgs;
use serde::{Deserialize, Serialize};
use slowdecay::analysis::{
    classify_decay, phragmen_check, profile_residual, stability_certificate, BoundLocation,
    DecayFit, PhragmenReport, ResidualReport, StabilityCertificate,
};
use slowdecay::atlas;
use slowdecay::heteroclinic::{
    attractor_rate, build_profile, detect_approach, shoot_heteroclinic, ApproachKind,
    ApproachReport, RateEstimate,
};
use slowdecay::Params;

use crate::config::Config;
use crate::{emit, Failure};

/// Everything `diagnostics.json` records about one profile.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProfileDiagnostics {
    pub n: u32,
    pub nu: f64,
    pub p: f64,
    /// Family parameter; infinite selects the singular solution.
    #[serde(with = "slowdecay::extreal")]
    pub lambda: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Tail coefficient gamma^{1/(p-1)}.
    pub singular_coefficient: f64,
    pub normalization_shift: f64,
    pub approach: ApproachReport,
    /// Fitted contraction rate; absent for a spiral approach.
    pub attractor_rate: Option<RateEstimate>,
    pub decay: DecayFit,
    pub phragmen_origin: PhragmenReport,
    pub phragmen_infinity: PhragmenReport,
    pub certificate: StabilityCertificate,
    pub residual: ResidualReport,
}

#[derive(ClapArgs)]
pub struct Args {
    /// Spatial dimension (N >= 3)
    #[arg(long = "N", alias = "n")]
    n: u32,
    /// Hardy index (nu > 0)
    #[arg(long)]
    nu: f64,
    /// Nonlinearity exponent, inside the slow-decay window
    #[arg(long)]
    p: f64,
    /// Family parameter; `inf` selects the singular solution
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Output directory for profile.csv and diagnostics.json
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// JSON file overriding solver options
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: &Args) -> Result<i32, Failure> {
    if !(args.lambda > 0.0) {
        return Err(Failure::invalid(format!(
            "lambda must be positive, got {}",
            args.lambda
        )));
    }
    let cfg = Config::load(args.config.as_deref())?;
    let params = Params::new(args.n, args.nu, args.p)?;

    let traj = shoot_heteroclinic(&params, &cfg.solver_options())?;
    let profile = build_profile(&traj, args.lambda, &params)?;

    let approach = detect_approach(&traj, &params)?;
    let rate = match approach.kind {
        ApproachKind::Monotone => Some(attractor_rate(&traj, &params)?),
        ApproachKind::Spiral => None,
    };
    let diagnostics = ProfileDiagnostics {
        n: args.n,
        nu: args.nu,
        p: args.p,
        lambda: args.lambda,
        beta: params.beta,
        gamma: params.gamma,
        singular_coefficient: atlas::singular_coefficient(&params)?,
        normalization_shift: traj.normalization_shift,
        approach,
        attractor_rate: rate,
        decay: classify_decay(&profile, &params)?,
        phragmen_origin: phragmen_check(&profile, &params, BoundLocation::Origin)?,
        phragmen_infinity: phragmen_check(&profile, &params, BoundLocation::Infinity)?,
        certificate: stability_certificate(&profile, &params)?,
        residual: profile_residual(&profile, &params)?,
    };

    std::fs::create_dir_all(&args.out)?;
    let csv_path = args.out.join("profile.csv");
    let json_path = args.out.join("diagnostics.json");
    emit::write_profile_csv(&csv_path, &profile, params.slow_rate(), 1)?;
    std::fs::write(&json_path, emit::to_json(&diagnostics)? + "\n")?;
    eprintln!(
        "wrote {} and {}",
        csv_path.display(),
        json_path.display()
    );
    Ok(0)
}
