//! Exterior-domain integration tests: closed-form linear solves, the
//! sub/supersolution sandwich, the monotone iteration, and the solution
//! family with its separation certificates.

use slowdecay::error::Error;
use slowdecay::exterior::{
    build_subsolution, build_supersolution, continuum_family, exterior_grid,
    monotone_iterate, solve_linear_hardy, ExteriorOptions, ExteriorProblem, LinearHardyProblem,
};
use slowdecay::heteroclinic::{build_profile_on, shoot_heteroclinic, SolverOptions};
use slowdecay::profile::RadialProfile;
use slowdecay::Params;

fn quick_opts() -> ExteriorOptions {
    ExteriorOptions {
        span: 10.0,
        spacing: 1e-3,
        ..ExteriorOptions::default()
    }
}

fn canonical() -> Params {
    Params::new(15, 6.5, 3.0).unwrap()
}

#[test]
fn zero_potential_solve_matches_the_power_law_at_default_resolution() {
    let params = canonical();
    let opts = ExteriorOptions::default();
    let grid = exterior_grid(1.0, &opts).unwrap();
    let rate = params.nu_star + params.nu;
    let potential = vec![0.0; grid.len()];
    let prob = LinearHardyProblem::new(1.0, 0.8, grid.clone(), potential, &params).unwrap();
    let sol = solve_linear_hardy(&prob, &params, &opts).unwrap();
    let mut worst: f64 = 0.0;
    for (t, v) in grid.iter().zip(&sol.values) {
        let exact = 0.8 * (-rate * t).exp();
        worst = worst.max((v - exact).abs() / exact);
    }
    assert!(worst <= 1e-6, "relative error {worst}");
}

#[test]
fn constant_scaled_potential_shifts_the_decay_rate() {
    // V = p gamma / r^2 relaxes the decaying rate from -nu_star - nu to
    // -nu_star - sqrt(nu^2 - p gamma), which is -9 for the canonical triple.
    let params = canonical();
    let opts = ExteriorOptions::default();
    let grid = exterior_grid(1.0, &opts).unwrap();
    let p_gamma = params.p * params.gamma;
    let potential: Vec<f64> = grid.iter().map(|t| p_gamma * (-2.0 * t).exp()).collect();
    let prob = LinearHardyProblem::new(1.0, 1.0, grid.clone(), potential, &params).unwrap();
    let expected_rate = -(params.nu_star + (params.nu * params.nu - p_gamma).sqrt());
    assert!((expected_rate + 9.0).abs() < 1e-12);
    let sol = solve_linear_hardy(&prob, &params, &opts).unwrap();
    let mut worst: f64 = 0.0;
    for (t, v) in grid.iter().zip(&sol.values) {
        let exact = (expected_rate * t).exp();
        worst = worst.max((v - exact).abs() / exact);
    }
    assert!(worst <= 1e-6, "relative error {worst}");
}

#[test]
fn linear_solver_converges_at_second_order() {
    let params = canonical();
    let rate = params.nu_star + params.nu;
    let mut errors = Vec::new();
    for spacing in [4e-3, 2e-3, 1e-3] {
        let opts = ExteriorOptions {
            span: 10.0,
            spacing,
            ..ExteriorOptions::default()
        };
        let grid = exterior_grid(1.0, &opts).unwrap();
        let prob =
            LinearHardyProblem::new(1.0, 1.0, grid.clone(), vec![0.0; grid.len()], &params)
                .unwrap();
        let sol = solve_linear_hardy(&prob, &params, &opts).unwrap();
        let t_end = *grid.last().unwrap();
        let exact = (-rate * t_end).exp();
        errors.push((sol.values.last().unwrap() - exact).abs() / exact);
    }
    for pair in errors.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!(
            (3.5..4.5).contains(&ratio),
            "halving the spacing should quarter the error: {errors:?}"
        );
    }
}

#[test]
fn sandwich_brackets_the_boundary_value_and_stays_ordered() {
    let params = canonical();
    let opts = quick_opts();
    let grid = exterior_grid(1.0, &opts).unwrap();
    let base = RadialProfile::singular(&params, grid).unwrap();
    let c = base.values[0];
    let psi = 0.4 * c;
    let ext = ExteriorProblem::new(params, 1.0, psi, base.clone()).unwrap();

    let sub = build_subsolution(&ext, &opts).unwrap();
    let sup = build_supersolution(&ext, &opts).unwrap();

    assert!((sub.values[0] - psi).abs() <= 1e-9 * c, "sub pins psi");
    assert!((sup.values[0] - psi).abs() <= 1e-9 * c, "sup pins psi");
    for i in 0..sub.len() {
        assert!(sub.values[i] >= 0.0);
        assert!(
            sub.values[i] <= sup.values[i] * (1.0 + 1e-12),
            "ordering fails at node {i}"
        );
        assert!(sup.values[i] <= base.values[i] * (1.0 + 1e-12));
    }
    // The gap closes at the far end: both ride the singular solution.
    let last = sub.len() - 1;
    let gap = (sup.values[last] - sub.values[last]) / sup.values[last];
    assert!(gap <= 1e-6, "far-end gap {gap}");
}

#[test]
fn monotone_iteration_solves_the_exterior_problem_from_the_sandwich() {
    let params = canonical();
    let opts = quick_opts();
    let grid = exterior_grid(1.0, &opts).unwrap();
    let base = RadialProfile::singular(&params, grid).unwrap();
    let psi = 0.25 * base.values[0];
    let ext = ExteriorProblem::new(params, 1.0, psi, base).unwrap();

    let sub = build_subsolution(&ext, &opts).unwrap();
    let sup = build_supersolution(&ext, &opts).unwrap();
    let report = monotone_iterate(&sub, &sup, &ext, &opts).unwrap();

    assert!(report.iterations < opts.max_iters, "{} sweeps", report.iterations);
    assert!(report.final_delta <= opts.iter_tol);
    assert!(
        report.residual_sup <= 1e-6,
        "scaled interior residual {}",
        report.residual_sup
    );
    let u = &report.solution;
    assert!((u.values[0] - psi).abs() <= 1e-9 * psi.max(1.0), "boundary value");
    for i in 0..u.len() {
        let slack = 1e-9 * ext.base_solution.values[i];
        assert!(u.values[i] >= sub.values[i] - slack, "below sub at {i}");
        assert!(u.values[i] <= sup.values[i] + slack, "above sup at {i}");
    }
}

#[test]
fn refining_the_grid_moves_the_solution_by_the_scheme_order() {
    let params = canonical();
    let mut coarse = None;
    let mut fine = None;
    for (spacing, slot) in [(2e-3, 0usize), (1e-3, 1)] {
        let opts = ExteriorOptions {
            span: 10.0,
            spacing,
            ..ExteriorOptions::default()
        };
        let grid = exterior_grid(1.0, &opts).unwrap();
        let base = RadialProfile::singular(&params, grid).unwrap();
        let psi = 0.25 * base.values[0];
        let ext = ExteriorProblem::new(params, 1.0, psi, base).unwrap();
        let sub = build_subsolution(&ext, &opts).unwrap();
        let sup = build_supersolution(&ext, &opts).unwrap();
        let report = monotone_iterate(&sub, &sup, &ext, &opts).unwrap();
        if slot == 0 {
            coarse = Some(report.solution);
        } else {
            fine = Some(report.solution);
        }
    }
    let coarse = coarse.unwrap();
    let fine = fine.unwrap();
    let mut worst: f64 = 0.0;
    for (i, v) in coarse.values.iter().enumerate() {
        let w = fine.values[2 * i];
        worst = worst.max((v - w).abs() / w.abs().max(1e-300));
    }
    // Second-order scheme: the 2e-3 -> 1e-3 refinement shift is O(h^2).
    assert!(worst <= 1e-4, "refinement moved the solution by {worst}");
}

#[test]
fn family_members_are_ordered_separated_and_certified() {
    // Default resolution: the certificate tolerances are calibrated for it,
    // and with psi = 0 the scaled residual near the boundary is h-limited.
    let params = canonical();
    let traj = shoot_heteroclinic(&params, &SolverOptions::default()).unwrap();
    let opts = ExteriorOptions::default();
    let lambdas = [1.0, 2.0, f64::INFINITY];
    let family = continuum_family(&traj, &params, 1.0, 0.0, &lambdas, &opts).unwrap();

    assert_eq!(family.lambda_psi, 0.0);
    assert_eq!(family.members.len(), 3);
    for member in &family.members {
        assert!(member.report.final_delta <= opts.iter_tol);
        assert!(member.report.residual_sup <= 1e-6, "residual {}", member.report.residual_sup);
        assert!(member.evidence.sandwich_ok);
        let (lo, hi) = member.evidence.rate_bracket;
        assert!(
            lo <= member.evidence.fitted_rate && member.evidence.fitted_rate <= hi,
            "lambda {}: fitted {} outside [{lo}, {hi}]",
            member.lambda,
            member.evidence.fitted_rate
        );
        assert!(member.evidence.h_tail_rel <= 1e-6);
    }
    // Pointwise ordering in lambda.
    for pair in family.members.windows(2) {
        let (a, b) = (&pair[0].report.solution, &pair[1].report.solution);
        for i in 1..a.len() {
            assert!(
                a.values[i] <= b.values[i] * (1.0 + 1e-9),
                "ordering fails at node {i}"
            );
        }
    }
    assert_eq!(family.distinctness.len(), 3);
    for cert in &family.distinctness {
        assert!(cert.certified, "pair ({}, {})", cert.lambda_lo, cert.lambda_hi);
        assert!(cert.min_margin > 0.0);
    }
}

#[test]
fn positive_boundary_data_raises_the_family_threshold() {
    let params = canonical();
    let traj = shoot_heteroclinic(&params, &SolverOptions::default()).unwrap();
    let opts = quick_opts();

    // psi equal to U_2(R_K) forces lambda_psi = 2.
    let probe = build_profile_on(&traj, 2.0, &params, vec![0.0, 0.01]).unwrap();
    let psi = probe.values[0];

    let err = continuum_family(&traj, &params, 1.0, psi, &[1.0], &opts).unwrap_err();
    assert!(
        matches!(err, Error::LambdaBelowThreshold { .. }),
        "got {err:?}"
    );

    let family = continuum_family(&traj, &params, 1.0, psi, &[4.0, f64::INFINITY], &opts).unwrap();
    assert!(
        (family.lambda_psi - 2.0).abs() <= 1e-6 * 2.0,
        "lambda_psi {}",
        family.lambda_psi
    );
    for member in &family.members {
        let u0 = member.report.solution.values[0];
        assert!((u0 - psi).abs() <= 1e-8 * psi, "boundary value {u0} vs {psi}");
    }
}

#[test]
fn invalid_boundary_data_and_unstable_regimes_are_rejected() {
    let params = canonical();
    let opts = quick_opts();
    let grid = exterior_grid(1.0, &opts).unwrap();
    let base = RadialProfile::singular(&params, grid).unwrap();
    let too_big = base.values[0] * 1.01;
    assert!(matches!(
        ExteriorProblem::new(params, 1.0, too_big, base),
        Err(Error::BadBoundaryData { .. })
    ));

    let unstable = Params::new(5, 1.5, 5.0).unwrap();
    let traj = shoot_heteroclinic(&unstable, &SolverOptions::default()).unwrap();
    assert!(matches!(
        continuum_family(&traj, &unstable, 1.0, 0.0, &[1.0], &opts),
        Err(Error::NonCoercive { .. })
    ));
}
