//! The `verify` subcommand: fast closed-form self-checks.
//!
//! Runs a battery of checks whose expected answers are known in closed form
//! (no shooting involved), prints one line per check, and exits 1 if any
//! check fails.

use clap::Args as ClapArgs;
use slowdecay::atlas::{
    classify_singular_stability, exponent_bounds, exponent_report, joseph_lundgren, nu_bar,
    stability_exponents,
};
use slowdecay::exterior::{
    build_subsolution, build_supersolution, exterior_grid, monotone_iterate, solve_linear_hardy,
    ExteriorOptions, ExteriorProblem, LinearHardyProblem,
};
use slowdecay::{Params, RadialProfile};

use crate::Failure;

#[derive(ClapArgs)]
pub struct Args {}

struct Battery {
    checks: usize,
    failures: usize,
}

impl Battery {
    fn report(&mut self, name: &str, ok: bool, detail: &str) {
        self.checks += 1;
        if ok {
            println!("ok: {name} ({detail})");
        } else {
            self.failures += 1;
            println!("FAILED: {name}: {detail}");
        }
    }
}

pub fn run(_args: &Args) -> Result<i32, Failure> {
    let mut battery = Battery {
        checks: 0,
        failures: 0,
    };

    let (ok, detail) = sharp_closed_form()?;
    battery.report("sharp stability exponent closed form", ok, &detail);

    let (ok, detail) = supercritical_closed_form()?;
    battery.report("supercritical stability exponent closed form", ok, &detail);

    let (ok, detail) = coincident_pair()?;
    battery.report("coincident exponent pair at the threshold index", ok, &detail);

    let (ok, detail) = threshold_identity()?;
    battery.report("threshold index identity", ok, &detail);

    let (ok, detail) = ordering_chain()?;
    battery.report("exponent ordering chain", ok, &detail);

    let (ok, detail) = dual_verdicts()?;
    battery.report("margin and interval verdicts agree", ok, &detail);

    let (ok, detail) = singular_residual()?;
    battery.report("singular solution residual", ok, &detail);

    let (ok, detail) = linear_zero_potential()?;
    battery.report("linear exterior solve, zero potential", ok, &detail);

    let (ok, detail) = linear_critical_mass()?;
    battery.report("linear exterior solve, critical-mass potential", ok, &detail);

    let (ok, detail) = micro_monotone_iteration()?;
    battery.report("monotone iteration micro-problem", ok, &detail);

    let passed = battery.checks - battery.failures;
    println!("verify: {passed}/{} checks passed", battery.checks);
    Ok(if battery.failures > 0 { 1 } else { 0 })
}

/// p_sharp at nu = nu_star vs (N + 2 sqrt(N-1)) / (N - 4 + 2 sqrt(N-1)).
fn sharp_closed_form() -> Result<(bool, String), Failure> {
    let mut worst: f64 = 0.0;
    for n in 11..=30u32 {
        let nf = n as f64;
        let root = (nf - 1.0).sqrt();
        let exps = stability_exponents(n, (nf - 2.0) / 2.0)?;
        let closed = (nf + 2.0 * root) / (nf - 4.0 + 2.0 * root);
        worst = worst.max((exps.p_sharp - closed).abs() / closed);
    }
    Ok((worst <= 1e-9, format!("max rel err {worst:.2e}")))
}

/// p_minus at nu = nu_star vs the Joseph-Lundgren closed form.
fn supercritical_closed_form() -> Result<(bool, String), Failure> {
    let mut worst: f64 = 0.0;
    for n in 11..=30u32 {
        let nf = n as f64;
        let exps = stability_exponents(n, (nf - 2.0) / 2.0)?;
        let jl = joseph_lundgren(n)?;
        let p_minus = exps
            .p_minus
            .ok_or_else(|| Failure::invalid(format!("p_minus missing at N = {n}")))?;
        worst = worst.max((p_minus - jl).abs() / jl);
    }
    Ok((worst <= 1e-9, format!("max rel err {worst:.2e}")))
}

/// p_minus = p_plus = (N+2)/(N-10) at nu = nu_bar for N >= 11.
fn coincident_pair() -> Result<(bool, String), Failure> {
    let mut worst: f64 = 0.0;
    for n in 11..=30u32 {
        let nf = n as f64;
        let exps = stability_exponents(n, nu_bar(n)?)?;
        let coincident = (nf + 2.0) / (nf - 10.0);
        for got in [exps.p_minus, exps.p_plus] {
            let got = got.ok_or_else(|| {
                Failure::invalid(format!("coincident pair missing at N = {n}"))
            })?;
            worst = worst.max((got - coincident).abs() / coincident);
        }
    }
    Ok((worst <= 1e-8, format!("max rel err {worst:.2e}")))
}

/// 108 (nu_bar^2 - nu_star^2) = (N-10)^2 (N-1).
fn threshold_identity() -> Result<(bool, String), Failure> {
    let mut worst: f64 = 0.0;
    for n in 3..=30u32 {
        let nf = n as f64;
        let nu_star = (nf - 2.0) / 2.0;
        let bar = nu_bar(n)?;
        let lhs = 108.0 * (bar * bar - nu_star * nu_star);
        let rhs = (nf - 10.0) * (nf - 10.0) * (nf - 1.0);
        worst = worst.max((lhs - rhs).abs() / rhs.max(1.0));
    }
    Ok((worst <= 1e-10, format!("max rel err {worst:.2e}")))
}

/// Deterministic (n, nu) sample set reused by the bulk checks.
fn sample_pairs() -> Vec<(u32, f64)> {
    let mut pairs = Vec::new();
    for n in 3..=30u32 {
        let bar = nu_bar(n).expect("n >= 3");
        for frac in [0.1, 0.35, 0.6, 0.85, 1.1, 1.35] {
            pairs.push((n, frac * bar));
        }
    }
    pairs
}

/// 1 < p_lower < p_sharp < p_sobolev < p_minus <= p_plus < p_upper.
fn ordering_chain() -> Result<(bool, String), Failure> {
    let pairs = sample_pairs();
    let mut violations = 0usize;
    for &(n, nu) in &pairs {
        let report = exponent_report(n, nu)?;
        let head = [1.0, report.p_lower, report.p_sharp, report.p_sobolev];
        let mut ok = head.windows(2).all(|w| w[0] < w[1]);
        ok &= match (report.p_minus, report.p_plus) {
            (Some(pm), Some(pp)) => report.p_sobolev < pm && pm <= pp && pp <= report.p_upper,
            (Some(pm), None) => report.p_sobolev < pm && pm < report.p_upper,
            (None, None) => report.p_sobolev < report.p_upper,
            (None, Some(_)) => false,
        };
        if !ok {
            violations += 1;
        }
    }
    Ok((
        violations == 0,
        format!("{} pairs, {violations} violations", pairs.len()),
    ))
}

/// Margin sign and interval membership decide every triple identically.
fn dual_verdicts() -> Result<(bool, String), Failure> {
    let mut disagreements = 0usize;
    let mut triples = 0usize;
    for &(n, nu) in &sample_pairs() {
        let bounds = exponent_bounds(n, nu)?;
        let hi = bounds.p_upper.min(bounds.p_lower + 50.0);
        for frac in [0.2, 0.5, 0.8] {
            let p = bounds.p_lower + frac * (hi - bounds.p_lower);
            let params = Params::new(n, nu, p)?;
            triples += 1;
            if !classify_singular_stability(&params)?.dual_agrees {
                disagreements += 1;
            }
        }
    }
    Ok((
        disagreements == 0,
        format!("{triples} triples, {disagreements} disagreements"),
    ))
}

/// The singular solution satisfies the radial equation to near roundoff.
fn singular_residual() -> Result<(bool, String), Failure> {
    let grid: Vec<f64> = (0..=200).map(|i| 0.5 * i as f64).collect();
    let mut worst: f64 = 0.0;
    for (n, nu, p) in [
        (15u32, 6.5, 3.0),
        (5, 1.5, 5.0),
        (11, 4.5, 10.0),
        (3, 0.25, 7.0),
        (30, 10.0, 1.4),
    ] {
        let params = Params::new(n, nu, p)?;
        let profile = RadialProfile::singular(&params, grid.clone())?;
        let report = slowdecay::analysis::profile_residual(&profile, &params)?;
        worst = worst.max(report.sup_scaled);
    }
    Ok((worst <= 1e-12, format!("worst scaled residual {worst:.2e}")))
}

/// V = 0 decays at the fast rate nu_star + nu.
fn linear_zero_potential() -> Result<(bool, String), Failure> {
    let params = Params::new(15, 6.5, 3.0)?;
    let opts = ExteriorOptions::default();
    let grid = exterior_grid(1.0, &opts)?;
    let problem = LinearHardyProblem::new(1.0, 1.0, grid.clone(), vec![0.0; grid.len()], &params)?;
    let sol = solve_linear_hardy(&problem, &params, &opts)?;
    let rate = params.nu_star + params.nu;
    let mut worst: f64 = 0.0;
    for (t, v) in grid.iter().zip(&sol.values) {
        let exact = (-rate * t).exp();
        worst = worst.max((v - exact).abs() / exact);
    }
    Ok((worst <= 1e-6, format!("max rel err {worst:.2e}")))
}

/// V = p gamma / r^2 shifts the decay rate to nu_star + sqrt(nu^2 - p gamma).
fn linear_critical_mass() -> Result<(bool, String), Failure> {
    let params = Params::new(15, 6.5, 3.0)?;
    let opts = ExteriorOptions::default();
    let grid = exterior_grid(1.0, &opts)?;
    let p_gamma = params.p * params.gamma;
    let potential: Vec<f64> = grid.iter().map(|t| p_gamma * (-2.0 * t).exp()).collect();
    let problem = LinearHardyProblem::new(1.0, 1.0, grid.clone(), potential, &params)?;
    let sol = solve_linear_hardy(&problem, &params, &opts)?;
    let rate = params.nu_star + (params.nu * params.nu - p_gamma).sqrt();
    let mut worst: f64 = 0.0;
    for (t, v) in grid.iter().zip(&sol.values) {
        let exact = (-rate * t).exp();
        worst = worst.max((v - exact).abs() / exact);
    }
    Ok((worst <= 1e-6, format!("max rel err {worst:.2e}")))
}

/// A coarse sub/supersolution sandwich converges onto the exterior solution.
fn micro_monotone_iteration() -> Result<(bool, String), Failure> {
    let params = Params::new(15, 6.5, 3.0)?;
    let opts = ExteriorOptions {
        span: 10.0,
        spacing: 1e-3,
        ..ExteriorOptions::default()
    };
    let grid = exterior_grid(1.0, &opts)?;
    let base = RadialProfile::singular(&params, grid)?;
    let psi = 0.25 * base.values[0];
    let problem = ExteriorProblem::new(params, 1.0, psi, base.clone())?;
    let sub = build_subsolution(&problem, &opts)?;
    let sup = build_supersolution(&problem, &opts)?;
    let report = monotone_iterate(&sub, &sup, &problem, &opts)?;
    let contained = report
        .solution
        .values
        .iter()
        .zip(&base.values)
        .all(|(u, b)| *u >= 0.0 && *u <= b * (1.0 + 1e-9));
    let ok = report.iterations < opts.max_iters
        && report.residual_sup <= 1e-6
        && contained
        && (report.solution.values[0] - psi).abs() <= 1e-12 * psi;
    Ok((
        ok,
        format!(
            "{} sweeps, residual {:.2e}",
            report.iterations, report.residual_sup
        ),
    ))
}
