//! The `phase` subcommand: the trajectory in slow-decay phase coordinates.
//!
//! Writes `trajectory.csv` (`t,w,w_prime,energy`) and `phase.json` into the
//! output directory.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Args as ClapArgs;
use serde::{Deserialize, Serialize};
use slowdecay::atlas;
use slowdecay::fowler::{attractor_energy, eigen_analysis, lyapunov_energy, EigenData};
use slowdecay::heteroclinic::{
    attractor_rate, detect_approach, shoot_heteroclinic, ApproachKind, ApproachReport,
    RateEstimate,
};
use slowdecay::Params;

use crate::config::Config;
use crate::{emit, Failure};

/// Everything `phase.json` records about one trajectory.
#[derive(Debug, Serialize, Deserialize)]
pub struct PhaseDiagnostics {
    pub n: u32,
    pub nu: f64,
    pub p: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Attractor abscissa gamma^{1/(p-1)}.
    pub attractor: f64,
    pub eigen: EigenData,
    pub normalization_shift: f64,
    pub arrival_time: f64,
    pub samples: usize,
    pub approach: ApproachReport,
    /// Fitted contraction rate; absent for a spiral approach.
    pub attractor_rate: Option<RateEstimate>,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub attractor_energy: f64,
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
    /// Output directory for trajectory.csv and phase.json
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// JSON file overriding solver options
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: &Args) -> Result<i32, Failure> {
    let cfg = Config::load(args.config.as_deref())?;
    let params = Params::new(args.n, args.nu, args.p)?;
    let traj = shoot_heteroclinic(&params, &cfg.solver_options())?;

    let approach = detect_approach(&traj, &params)?;
    let rate = match approach.kind {
        ApproachKind::Monotone => Some(attractor_rate(&traj, &params)?),
        ApproachKind::Spiral => None,
    };
    let diagnostics = PhaseDiagnostics {
        n: args.n,
        nu: args.nu,
        p: args.p,
        beta: params.beta,
        gamma: params.gamma,
        attractor: atlas::singular_coefficient(&params)?,
        eigen: eigen_analysis(&params)?,
        normalization_shift: traj.normalization_shift,
        arrival_time: *traj.t_grid.last().unwrap(),
        samples: traj.t_grid.len(),
        approach,
        attractor_rate: rate,
        initial_energy: lyapunov_energy(traj.states[0], &params),
        final_energy: lyapunov_energy(*traj.states.last().unwrap(), &params),
        attractor_energy: attractor_energy(&params)?,
    };

    std::fs::create_dir_all(&args.out)?;
    let csv_path = args.out.join("trajectory.csv");
    let json_path = args.out.join("phase.json");
    let mut out = BufWriter::new(File::create(&csv_path)?);
    writeln!(out, "t,w,w_prime,energy")?;
    for (t, st) in traj.t_grid.iter().zip(&traj.states) {
        writeln!(
            out,
            "{},{},{},{}",
            emit::float(*t),
            emit::float(st.x),
            emit::float(st.y),
            emit::float(lyapunov_energy(*st, &params))
        )?;
    }
    out.flush()?;
    std::fs::write(&json_path, emit::to_json(&diagnostics)? + "\n")?;
    eprintln!(
        "wrote {} and {}",
        csv_path.display(),
        json_path.display()
    );
    Ok(0)
}
