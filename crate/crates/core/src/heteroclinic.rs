//! Construction of the connecting orbit and the slow-decay solution family.
//!
//! For `p` strictly between the Sobolev and upper critical exponents the phase
//! system owns a heteroclinic orbit `w` running from the origin to the
//! attractor.  Shooting along the unstable direction produces it numerically;
//! a two-resolution Richardson pass normalises the time origin so that
//! `w(t) ~ e^{alpha_plus t}` as `t -> -inf` with unit head coefficient.  The
//! whole solution family is then `U_lambda(r) = r^{-2/(p-1)} w(log r + log
//! lambda)`, with the singular solution as the `lambda = inf` endpoint.

use crate::atlas::{self, Params};
use crate::error::{Error, Result};
use crate::fowler::{self, PhaseState};
use crate::ode::{self, OdeOptions, OdeSolution};
use crate::profile::{DecayClass, RadialProfile};
use serde::{Deserialize, Serialize};

/// Tuning knobs for the shooting pass.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Distance from the origin along the unstable eigenvector at launch.
    pub eps_start: f64,
    /// Relative integration tolerance.
    pub rtol: f64,
    /// Absolute integration tolerance.
    pub atol: f64,
    /// Arrival threshold: phase distance to the attractor, scaled by
    /// `max(1, attractor)`.
    pub tol_attr: f64,
    /// Integration horizon; when absent, `200 / min(|Re alpha_star_plus|,
    /// beta, alpha_plus)`.
    pub t_max: Option<f64>,
    /// Target spacing of the resampled trajectory (shrunk automatically for
    /// fast rates).
    pub dense_spacing: f64,
    /// How far the default profile grid extends to the left of the
    /// normalised time origin.
    pub head_span: f64,
    /// Launch from the second-order unstable-manifold expansion instead of
    /// the tangent line.
    pub manifold_correction: bool,
    /// Step budget for the adaptive integrator.
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            eps_start: 1e-6,
            rtol: 1e-10,
            atol: 1e-10,
            tol_attr: 1e-9,
            t_max: None,
            dense_spacing: 0.01,
            head_span: 25.0,
            manifold_correction: false,
            max_steps: 2_000_000,
        }
    }
}

/// How a trajectory settles on the attractor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ApproachKind {
    /// Monotone amplitude, real contraction rates.
    #[serde(rename = "monotone")]
    Monotone,
    /// Damped oscillation around the attractor.
    #[serde(rename = "spiral")]
    Spiral,
}

impl std::fmt::Display for ApproachKind {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str(match self {
            ApproachKind::Monotone => "monotone",
            ApproachKind::Spiral => "spiral",
        })
    }
}

/// A normalised connecting orbit sampled on a uniform time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTrajectory {
    /// Uniform, strictly increasing sample times (already normalised).
    pub t_grid: Vec<f64>,
    /// Phase states at the sample times.
    pub states: Vec<PhaseState>,
    /// Shift applied to raw integration time so the head coefficient is 1.
    pub normalization_shift: f64,
    /// Detected approach pattern, when unambiguous.
    pub approach: Option<ApproachKind>,
}

impl PhaseTrajectory {
    /// Grid spacing, provided the time grid is uniform.
    pub fn uniform_spacing(&self) -> Result<f64> {
        if self.t_grid.len() < 2 {
            return Err(Error::BadGrid { min: 2 });
        }
        let h = self.t_grid[1] - self.t_grid[0];
        let scale = self
            .t_grid
            .iter()
            .fold(1.0_f64, |m, &v| m.max(v.abs()));
        let tol = 1e-6 * h.abs() + 1e-13 * scale;
        for pair in self.t_grid.windows(2) {
            if ((pair[1] - pair[0]) - h).abs() > tol {
                return Err(Error::InvalidInput(
                    "operation requires a uniform time grid".into(),
                ));
            }
        }
        Ok(h)
    }
}

struct Shot {
    sol: OdeSolution,
    delta: f64,
    crossing: f64,
}

/// Validates that `p` lies strictly between the Sobolev and upper critical
/// exponents, the regime in which the connecting orbit exists.
fn require_supercritical(params: &Params) -> Result<()> {
    let bounds = atlas::exponent_bounds(params.n, params.nu)?;
    // An effectively zero beta is the Hamiltonian borderline (the float
    // image of the Sobolev exponent lands there); the orbit toward the
    // attractor only exists at strictly positive damping.
    let beta_floor = crate::fowler::BETA_ZERO_TOL * params.nu_star.max(1.0);
    if params.beta <= beta_floor || params.gamma <= 0.0 {
        return Err(Error::ExponentOutOfRange {
            p: params.p,
            lo: bounds.p_sobolev,
            hi: bounds.p_upper,
        });
    }
    Ok(())
}

fn contraction_rates(params: &Params) -> (f64, f64) {
    let margin = atlas::stability_margin(params);
    let alpha_plus = -params.beta + params.nu;
    let re_star = if margin >= 0.0 {
        params.beta - margin.sqrt()
    } else {
        params.beta
    };
    (re_star.min(params.beta).min(alpha_plus), alpha_plus)
}

/// Default integration horizon for `params`.
pub fn default_t_max(params: &Params) -> Result<f64> {
    require_supercritical(params)?;
    let (rate, _) = contraction_rates(params);
    Ok(200.0 / rate)
}

/// Shoots the connecting orbit and returns it normalised and resampled.
///
/// Two launches at `eps_start` and `eps_start / 4` are combined by Richardson
/// extrapolation of the half-amplitude crossing time, eliminating the leading
/// `eps^{p-1}` error of the time normalisation.  The returned grid is the
/// finer launch resampled at uniform spacing, already shifted.
pub fn shoot_heteroclinic(params: &Params, opts: &SolverOptions) -> Result<PhaseTrajectory> {
    require_supercritical(params)?;
    if !(opts.eps_start > 0.0) || opts.eps_start > 1e-2 {
        return Err(Error::InvalidInput(
            "eps_start must lie in (0, 1e-2]".into(),
        ));
    }
    let attr = atlas::singular_coefficient(params)?;
    let (rate, alpha_plus) = contraction_rates(params);
    let t_max = opts.t_max.unwrap_or(200.0 / rate);
    let tol = opts.tol_attr * attr.max(1.0);

    let run1 = launch(params, opts, attr, alpha_plus, opts.eps_start, t_max, tol)?;
    let run2 = launch(
        params,
        opts,
        attr,
        alpha_plus,
        opts.eps_start / 4.0,
        t_max,
        tol,
    )?;

    let s1 = run1.crossing + run1.delta;
    let s2 = run2.crossing + run2.delta;
    let q = 4.0_f64.powf(params.p - 1.0);
    let correction = if q.is_finite() { (s2 - s1) / (q - 1.0) } else { 0.0 };
    let shift = run2.delta + correction;

    let h = effective_spacing(params, opts);
    let tau_end = run2.sol.t_end;
    let n = (tau_end / h).floor() as usize;
    let mut t_grid = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let tau = i as f64 * h;
        let y = run2.sol.eval(tau);
        t_grid.push(shift + tau);
        states.push(PhaseState { x: y[0], y: y[1] });
    }

    let mut traj = PhaseTrajectory {
        t_grid,
        states,
        normalization_shift: shift,
        approach: None,
    };
    traj.approach = detect_approach(&traj, params).ok().map(|r| r.kind);
    Ok(traj)
}

fn effective_spacing(params: &Params, opts: &SolverOptions) -> f64 {
    let stiffness = params.beta + params.nu;
    let shrink = 0.01 * (8.0 / stiffness).powf(1.5);
    opts.dense_spacing.min(shrink).max(1e-4)
}

#[allow(clippy::too_many_arguments)]
fn launch(
    params: &Params,
    opts: &SolverOptions,
    attr: f64,
    alpha_plus: f64,
    eps: f64,
    t_max: f64,
    tol: f64,
) -> Result<Shot> {
    let scale = (1.0 + alpha_plus * alpha_plus).sqrt();
    let x0 = eps / scale;
    let mut y0 = alpha_plus * x0;
    if opts.manifold_correction {
        let c_p = head_curvature(params);
        y0 += c_p * alpha_plus * (params.p - 1.0) * fowler::xpow(x0, params.p);
    }

    let p = *params;
    let field = move |_t: f64, y: [f64; 2]| {
        let d = fowler::vector_field(PhaseState { x: y[0], y: y[1] }, &p);
        [d.x, d.y]
    };
    let ode_opts = OdeOptions {
        rtol: opts.rtol,
        atol: opts.atol,
        h_max: None,
        max_steps: opts.max_steps,
    };
    let stop = move |_t: f64, y: [f64; 2]| {
        let dx = y[0] - attr;
        (dx * dx + y[1] * y[1]).sqrt() <= tol
    };
    let sol = ode::integrate(field, 0.0, [x0, y0], t_max, &ode_opts, stop)?;
    if !sol.stopped {
        let end = sol.y_end;
        let dx = end[0] - attr;
        return Err(Error::NonConvergence {
            t_max,
            dist: (dx * dx + end[1] * end[1]).sqrt(),
        });
    }

    let crossing = first_upward_crossing(&sol, 0.5 * attr)?;
    Ok(Shot {
        sol,
        delta: x0.ln() / alpha_plus,
        crossing,
    })
}

/// Coefficient of the second unstable-manifold term: the head expansion is
/// `w ~ e^{alpha_plus t} + c_p e^{p alpha_plus t}`.
fn head_curvature(params: &Params) -> f64 {
    let alpha_plus = -params.beta + params.nu;
    let alpha_minus = -params.beta - params.nu;
    -1.0 / (alpha_plus * (params.p - 1.0) * (params.p * alpha_plus - alpha_minus))
}

fn first_upward_crossing(sol: &OdeSolution, target: f64) -> Result<f64> {
    for step in &sol.steps {
        let left = step.eval(step.t0)[0];
        let right = step.eval(step.t0 + step.h)[0];
        if left < target && right >= target {
            let mut a = step.t0;
            let mut b = step.t0 + step.h;
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if step.eval(mid)[0] < target {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return Ok(0.5 * (a + b));
        }
    }
    Err(Error::AmbiguousApproach(
        "trajectory never crossed half the attractor amplitude".into(),
    ))
}

/// Piecewise evaluator for the normalised orbit on the whole real line.
///
/// Left of the sampled span it uses the two-term head expansion, inside it
/// uses cubic Hermite interpolation of the samples, and right of the span the
/// linearised tail at the attractor.
#[derive(Debug, Clone)]
pub struct OrbitModel {
    params: Params,
    attr: f64,
    alpha_plus: f64,
    c_p: f64,
    t_start: f64,
    t_end: f64,
    h: f64,
    w: Vec<f64>,
    y: Vec<f64>,
    tail: Tail,
}

#[derive(Debug, Clone, Copy)]
enum Tail {
    Node { delta: f64, dot: f64, rate: f64 },
    Spiral { a: f64, b: f64, beta: f64, omega: f64 },
}

/// Builds the orbit evaluator from a shot trajectory.
pub fn orbit_model(traj: &PhaseTrajectory, params: &Params) -> Result<OrbitModel> {
    let h = traj.uniform_spacing()?;
    if traj.states.len() != traj.t_grid.len() || traj.states.len() < 4 {
        return Err(Error::BadGrid { min: 4 });
    }
    let attr = atlas::singular_coefficient(params)?;
    let margin = atlas::stability_margin(params);
    let end = *traj.states.last().expect("nonempty");
    let tail = if margin >= 0.0 {
        let rate = -params.beta + margin.sqrt();
        Tail::Node {
            delta: end.x - attr,
            dot: end.y,
            rate,
        }
    } else {
        let omega = (-margin).sqrt();
        let a = end.x - attr;
        Tail::Spiral {
            a,
            b: (end.y + params.beta * a) / omega,
            beta: params.beta,
            omega,
        }
    };
    Ok(OrbitModel {
        params: *params,
        attr,
        alpha_plus: -params.beta + params.nu,
        c_p: head_curvature(params),
        t_start: traj.t_grid[0],
        t_end: *traj.t_grid.last().expect("nonempty"),
        h,
        w: traj.states.iter().map(|s| s.x).collect(),
        y: traj.states.iter().map(|s| s.y).collect(),
        tail,
    })
}

impl OrbitModel {
    /// Attractor amplitude `gamma^{1/(p-1)}`.
    pub fn attractor(&self) -> f64 {
        self.attr
    }

    /// First sampled time.
    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    /// Last sampled time.
    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Amplitude `w(t)`.
    pub fn w(&self, t: f64) -> f64 {
        self.state(t).x
    }

    /// Full phase state at `t`.
    pub fn state(&self, t: f64) -> PhaseState {
        if t < self.t_start {
            let head = (self.alpha_plus * t).exp();
            let second = self.c_p * (self.params.p * self.alpha_plus * t).exp();
            PhaseState {
                x: head + second,
                y: self.alpha_plus * head
                    + self.params.p * self.alpha_plus * second,
            }
        } else if t > self.t_end {
            let dt = t - self.t_end;
            match self.tail {
                Tail::Node { delta, dot, rate } => {
                    let decay = (rate * dt).exp();
                    PhaseState {
                        x: self.attr + delta * decay,
                        y: dot * decay,
                    }
                }
                Tail::Spiral { a, b, beta, omega } => {
                    let decay = (-beta * dt).exp();
                    let (sin, cos) = (omega * dt).sin_cos();
                    let osc = a * cos + b * sin;
                    let osc_dot = omega * (b * cos - a * sin);
                    PhaseState {
                        x: self.attr + decay * osc,
                        y: decay * (osc_dot - beta * osc),
                    }
                }
            }
        } else {
            let pos = (t - self.t_start) / self.h;
            let mut i = pos.floor() as usize;
            if i + 1 >= self.w.len() {
                i = self.w.len() - 2;
            }
            let u = (t - (self.t_start + i as f64 * self.h)) / self.h;
            let (w0, w1) = (self.w[i], self.w[i + 1]);
            let (y0, y1) = (self.y[i], self.y[i + 1]);
            let x = hermite(w0, y0 * self.h, w1, y1 * self.h, u);
            let f0 = fowler::vector_field(PhaseState { x: w0, y: y0 }, &self.params).y;
            let f1 = fowler::vector_field(PhaseState { x: w1, y: y1 }, &self.params).y;
            let y = hermite(y0, f0 * self.h, y1, f1 * self.h, u);
            PhaseState { x, y }
        }
    }
}

fn hermite(v0: f64, d0: f64, v1: f64, d1: f64, u: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    v0 * (2.0 * u3 - 3.0 * u2 + 1.0)
        + d0 * (u3 - 2.0 * u2 + u)
        + v1 * (-2.0 * u3 + 3.0 * u2)
        + d1 * (u3 - u2)
}

/// Builds `U_lambda` on the trajectory's default grid.
///
/// `lambda` may be infinite, producing the singular solution on that grid.
pub fn build_profile(
    traj: &PhaseTrajectory,
    lambda: f64,
    params: &Params,
) -> Result<RadialProfile> {
    let h = traj.uniform_spacing()?;
    let opts = SolverOptions::default();
    let start = traj.normalization_shift - opts.head_span;
    let end = *traj.t_grid.last().expect("nonempty");
    let n = ((end - start) / h).floor() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| start + i as f64 * h).collect();
    build_profile_on(traj, lambda, params, grid)
}

/// Builds `U_lambda` on a caller-supplied log-radius grid.
pub fn build_profile_on(
    traj: &PhaseTrajectory,
    lambda: f64,
    params: &Params,
    t_grid: Vec<f64>,
) -> Result<RadialProfile> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "lambda must be positive or infinite, got {lambda}"
        )));
    }
    if lambda.is_infinite() {
        return RadialProfile::singular(params, t_grid);
    }
    let model = orbit_model(traj, params)?;
    let s = params.slow_rate();
    let shift = lambda.ln();
    let values: Vec<f64> = t_grid
        .iter()
        .map(|&t| (-s * t).exp() * model.w(t + shift))
        .collect();
    RadialProfile::from_samples(t_grid, values, Some(lambda), DecayClass::Unclassified)
}

/// Outcome of the approach-pattern detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachReport {
    /// Detected pattern.
    pub kind: ApproachKind,
    /// Times where the amplitude crosses the attractor level.
    pub crossing_times: Vec<f64>,
    /// Whether the amplitude was nondecreasing throughout.
    pub monotone: bool,
}

/// Classifies how the sampled trajectory approaches the attractor and checks
/// the observation against the linearised prediction.
pub fn detect_approach(traj: &PhaseTrajectory, params: &Params) -> Result<ApproachReport> {
    if traj.states.len() < 3 {
        return Err(Error::BadGrid { min: 3 });
    }
    let attr = atlas::singular_coefficient(params)?;
    let slack = 1e-9 * attr.max(1.0);
    let dead_band = 1e-12 * attr;

    let monotone = traj
        .states
        .windows(2)
        .all(|w| w[1].x >= w[0].x - slack);

    let mut crossings = Vec::new();
    let mut last_sign = 0i8;
    let mut last_idx = 0usize;
    for (i, st) in traj.states.iter().enumerate() {
        let d = st.x - attr;
        let sign = if d.abs() <= dead_band {
            0
        } else if d > 0.0 {
            1
        } else {
            -1
        };
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                let t0 = traj.t_grid[last_idx];
                let t1 = traj.t_grid[i];
                let d0 = traj.states[last_idx].x - attr;
                let d1 = d;
                crossings.push(t0 + (t1 - t0) * (d0 / (d0 - d1)));
            }
            last_sign = sign;
            last_idx = i;
        }
    }

    let observed = if crossings.len() >= 2 {
        ApproachKind::Spiral
    } else if monotone {
        ApproachKind::Monotone
    } else {
        return Err(Error::AmbiguousApproach(format!(
            "{} crossings and non-monotone amplitude within the window",
            crossings.len()
        )));
    };

    let predicted = if atlas::stability_margin(params) >= -atlas::margin_boundary_tol(params) {
        ApproachKind::Monotone
    } else {
        ApproachKind::Spiral
    };
    if observed != predicted {
        return Err(Error::AmbiguousApproach(format!(
            "observed {observed} approach but the linearisation predicts {predicted}"
        )));
    }

    Ok(ApproachReport {
        kind: observed,
        crossing_times: crossings,
        monotone,
    })
}

/// A fitted contraction rate near the attractor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    /// Log-linear slope of the distance to the attractor.
    pub rate: f64,
    /// Eigenvalue the slope should reproduce.
    pub expected: f64,
    /// True when the contraction eigenvalues nearly coincide, which slows
    /// the asymptotics and degrades the fit.
    pub double_root: bool,
    /// Time window used for the fit.
    pub window: (f64, f64),
    /// Number of samples in the fit.
    pub n_samples: usize,
}

/// Fits the contraction rate of a monotone trajectory onto the attractor.
pub fn attractor_rate(traj: &PhaseTrajectory, params: &Params) -> Result<RateEstimate> {
    let margin = atlas::stability_margin(params);
    if margin < -atlas::margin_boundary_tol(params) {
        return Err(Error::SpiralRate);
    }
    let margin = margin.max(0.0);
    let attr = atlas::singular_coefficient(params)?;
    let d_end = (attr - traj.states.last().expect("nonempty").x).abs();
    let floor = (100.0 * d_end)
        .max(1e4 * f64::EPSILON * attr)
        .max(1e-300);

    let mut ceiling = 100.0 * floor;
    loop {
        let pts: Vec<(f64, f64)> = traj
            .t_grid
            .iter()
            .zip(&traj.states)
            .filter_map(|(&t, st)| {
                let d = attr - st.x;
                (d >= floor && d <= ceiling).then(|| (t, d.ln()))
            })
            .collect();
        if pts.len() >= 8 {
            let (slope, _) = least_squares(&pts);
            let root = margin.sqrt();
            let double_root = root <= 0.05 * params.beta;
            let expected = if double_root {
                -params.beta
            } else {
                -params.beta + root
            };
            return Ok(RateEstimate {
                rate: slope,
                expected,
                double_root,
                window: (pts[0].0, pts[pts.len() - 1].0),
                n_samples: pts.len(),
            });
        }
        ceiling *= 10.0;
        if ceiling > attr {
            return Err(Error::InsufficientGrid {
                have: 0.0,
                need: 1.0,
            });
        }
    }
}

pub(crate) fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, nu: f64, p: f64) -> Params {
        Params::new(n, nu, p).unwrap()
    }

    #[test]
    fn rejects_subcritical_exponents() {
        let pr = params(5, 1.5, 2.0);
        assert!(pr.beta < 0.0);
        assert!(matches!(
            shoot_heteroclinic(&pr, &SolverOptions::default()),
            Err(Error::ExponentOutOfRange { .. })
        ));
        let sobolev = params(5, 1.5, 7.0 / 3.0);
        assert!(matches!(
            shoot_heteroclinic(&sobolev, &SolverOptions::default()),
            Err(Error::ExponentOutOfRange { .. })
        ));
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let f = |x: f64| 2.0 * x * x * x - x * x + 0.5 * x - 3.0;
        let df = |x: f64| 6.0 * x * x - 2.0 * x + 0.5;
        for k in 0..=10 {
            let u = 0.1 * k as f64;
            let got = hermite(f(0.0), df(0.0), f(1.0), df(1.0), u);
            assert!((got - f(u)).abs() < 1e-13);
        }
    }

    #[test]
    fn head_curvature_satisfies_the_manifold_identity() {
        let pr = params(15, 6.5, 3.0);
        let c_p = head_curvature(&pr);
        let a = -pr.beta + pr.nu;
        let pa = pr.p * a;
        let residual = (pa * pa + 2.0 * pr.beta * pa - pr.gamma) * c_p + 1.0;
        assert!(residual.abs() < 1e-12);
    }

    #[test]
    fn shot_reaches_the_attractor_for_the_canonical_node() {
        let pr = params(15, 6.5, 3.0);
        let traj = shoot_heteroclinic(&pr, &SolverOptions::default()).unwrap();
        let attr = atlas::singular_coefficient(&pr).unwrap();
        let last = traj.states.last().unwrap();
        assert!((last.x - attr).abs() < 1e-6);
        assert_eq!(traj.approach, Some(ApproachKind::Monotone));
    }

    #[test]
    fn detect_approach_flags_spirals() {
        let pr = params(5, 1.5, 5.0);
        let traj = shoot_heteroclinic(&pr, &SolverOptions::default()).unwrap();
        let report = detect_approach(&traj, &pr).unwrap();
        assert_eq!(report.kind, ApproachKind::Spiral);
        assert!(report.crossing_times.len() >= 3);
    }

    #[test]
    fn attractor_rate_refuses_spirals() {
        let pr = params(5, 1.5, 5.0);
        let traj = shoot_heteroclinic(&pr, &SolverOptions::default()).unwrap();
        assert!(matches!(
            attractor_rate(&traj, &pr),
            Err(Error::SpiralRate)
        ));
    }

    #[test]
    fn build_profile_rejects_bad_lambda() {
        let pr = params(15, 6.5, 3.0);
        let traj = shoot_heteroclinic(&pr, &SolverOptions::default()).unwrap();
        assert!(build_profile(&traj, 0.0, &pr).is_err());
        assert!(build_profile(&traj, f64::NAN, &pr).is_err());
        assert!(build_profile(&traj, f64::INFINITY, &pr).is_ok());
    }

    #[test]
    fn least_squares_recovers_a_line() {
        let pts: Vec<(f64, f64)> = (0..50)
            .map(|i| {
                let x = 0.1 * i as f64;
                (x, -2.5 * x + 0.75)
            })
            .collect();
        let (slope, intercept) = least_squares(&pts);
        assert!((slope + 2.5).abs() < 1e-12);
        assert!((intercept - 0.75).abs() < 1e-12);
    }
}
