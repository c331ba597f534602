//! Adaptive Dormand-Prince 5(4) integration with dense output.
//!
//! A fixed-dimension (planar) implementation tuned for the phase system: FSAL
//! evaluation, PI step-size control, and the standard fifth-order tableau with
//! the fourth-order interpolant, so trajectories can be resampled anywhere
//! inside the integration span without re-stepping.

use crate::error::{Error, Result};

/// State dimension; the phase system is planar.
pub const DIM: usize = 2;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFE: f64 = 0.9;
const BETA_PI: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA_PI * 0.75;
const FAC_SHRINK: f64 = 5.0;
const FAC_GROW: f64 = 0.1;

/// Tolerances and limits for one integration run.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    /// Relative tolerance per component.
    pub rtol: f64,
    /// Absolute tolerance per component.
    pub atol: f64,
    /// Optional cap on the step size.
    pub h_max: Option<f64>,
    /// Accepted-step budget.
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-10,
            h_max: None,
            max_steps: 2_000_000,
        }
    }
}

/// Dense-output coefficients for one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep {
    /// Left endpoint of the step.
    pub t0: f64,
    /// Step length.
    pub h: f64,
    cont: [[f64; DIM]; 5],
}

impl DenseStep {
    /// Evaluates the quartic interpolant at `t` inside the step.
    pub fn eval(&self, t: f64) -> [f64; DIM] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut out = [0.0; DIM];
        for i in 0..DIM {
            out[i] = self.cont[0][i]
                + s * (self.cont[1][i]
                    + s1 * (self.cont[2][i] + s * (self.cont[3][i] + s1 * self.cont[4][i])));
        }
        out
    }
}

/// Result of an adaptive integration run.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    /// Initial time.
    pub t_start: f64,
    /// Final time actually reached.
    pub t_end: f64,
    /// State at `t_end`.
    pub y_end: [f64; DIM],
    /// Dense-output records, one per accepted step.
    pub steps: Vec<DenseStep>,
    /// True when the stop predicate ended the run before the horizon.
    pub stopped: bool,
    /// Number of accepted steps.
    pub n_accepted: usize,
    /// Number of rejected trial steps.
    pub n_rejected: usize,
}

impl OdeSolution {
    /// Evaluates the dense output at `t`, clamped to the integration span.
    pub fn eval(&self, t: f64) -> [f64; DIM] {
        let t = t.clamp(self.t_start, self.t_end);
        if self.steps.is_empty() {
            return self.y_end;
        }
        let idx = match self
            .steps
            .binary_search_by(|st| st.t0.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        self.steps[idx].eval(t)
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (`t_end > t0`).
///
/// After every accepted step the predicate `stop` is consulted with the new
/// time and state; returning true ends the run early with `stopped` set.
pub fn integrate<F, S>(
    f: F,
    t0: f64,
    y0: [f64; DIM],
    t_end: f64,
    opts: &OdeOptions,
    mut stop: S,
) -> Result<OdeSolution>
where
    F: Fn(f64, [f64; DIM]) -> [f64; DIM],
    S: FnMut(f64, [f64; DIM]) -> bool,
{
    if !(t_end > t0) {
        return Err(Error::InvalidInput(
            "integration horizon must lie strictly after the start".into(),
        ));
    }
    let h_max = opts.h_max.unwrap_or(t_end - t0);
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, y);
    let mut h = initial_step(&f, t, y, k1, h_max, opts);
    let mut facold = 1e-4_f64;
    let mut steps = Vec::new();
    let mut n_accepted = 0usize;
    let mut n_rejected = 0usize;
    let mut stopped = stop(t, y);

    while !stopped && t < t_end {
        if n_accepted + n_rejected > opts.max_steps {
            return Err(Error::StepLimit(opts.max_steps));
        }
        if h < 1e4 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepUnderflow(t));
        }
        let mut last = false;
        if t + h >= t_end {
            h = t_end - t;
            last = true;
        }

        let mut yt = [0.0; DIM];
        for i in 0..DIM {
            yt[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = f(t + C[1] * h, yt);
        for i in 0..DIM {
            yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = f(t + C[2] * h, yt);
        for i in 0..DIM {
            yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = f(t + C[3] * h, yt);
        for i in 0..DIM {
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = f(t + C[4] * h, yt);
        for i in 0..DIM {
            yt[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = f(t + C[5] * h, yt);
        let mut y_new = [0.0; DIM];
        for i in 0..DIM {
            y_new[i] = y[i]
                + h * (B[0] * k1[i]
                    + B[2] * k3[i]
                    + B[3] * k4[i]
                    + B[4] * k5[i]
                    + B[5] * k6[i]);
        }
        let k7 = f(t + h, y_new);

        let mut err_sq = 0.0;
        for i in 0..DIM {
            let e_i = h
                * (E[0] * k1[i]
                    + E[2] * k3[i]
                    + E[3] * k4[i]
                    + E[4] * k5[i]
                    + E[5] * k6[i]
                    + E[6] * k7[i]);
            let sk = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e_i / sk) * (e_i / sk);
        }
        let err = (err_sq / DIM as f64).sqrt();

        let fac11 = err.powf(EXPO1);
        if err <= 1.0 {
            let fac = (fac11 / facold.powf(BETA_PI) / SAFE).clamp(FAC_GROW, FAC_SHRINK);
            facold = err.max(1e-4);
            let mut cont = [[0.0; DIM]; 5];
            for i in 0..DIM {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h * k7[i] - bspl;
                cont[4][i] = h
                    * (D[0] * k1[i]
                        + D[2] * k3[i]
                        + D[3] * k4[i]
                        + D[4] * k5[i]
                        + D[5] * k6[i]
                        + D[6] * k7[i]);
            }
            steps.push(DenseStep { t0: t, h, cont });
            n_accepted += 1;
            t = if last { t_end } else { t + h };
            y = y_new;
            k1 = k7;
            stopped = stop(t, y);
            h = (h / fac).min(h_max);
        } else {
            n_rejected += 1;
            let fac = (fac11 / SAFE).min(FAC_SHRINK);
            h /= fac.max(1.0 / FAC_SHRINK);
        }
    }

    Ok(OdeSolution {
        t_start: t0,
        t_end: t,
        y_end: y,
        steps,
        stopped,
        n_accepted,
        n_rejected,
    })
}

/// Hairer's starting-step heuristic.
fn initial_step<F>(f: &F, t: f64, y: [f64; DIM], f0: [f64; DIM], h_max: f64, opts: &OdeOptions) -> f64
where
    F: Fn(f64, [f64; DIM]) -> [f64; DIM],
{
    let mut dnf = 0.0;
    let mut dny = 0.0;
    for i in 0..DIM {
        let sk = opts.atol + opts.rtol * y[i].abs();
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y[i] / sk) * (y[i] / sk);
    }
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        (dny / dnf).sqrt() * 0.01
    };
    h = h.min(h_max);

    let mut y1 = [0.0; DIM];
    for i in 0..DIM {
        y1[i] = y[i] + h * f0[i];
    }
    let f1 = f(t + h, y1);
    let mut der2 = 0.0;
    for i in 0..DIM {
        let sk = opts.atol + opts.rtol * y[i].abs();
        der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    let der2 = der2.sqrt() / h;
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(h_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(_t: f64, y: [f64; 2]) -> [f64; 2] {
        [y[1], -y[0]]
    }

    #[test]
    fn integrates_the_harmonic_oscillator_to_tolerance() {
        let opts = OdeOptions::default();
        let sol = integrate(harmonic, 0.0, [1.0, 0.0], 10.0, &opts, |_, _| false).unwrap();
        assert!((sol.y_end[0] - 10.0_f64.cos()).abs() < 1e-8);
        assert!((sol.y_end[1] + 10.0_f64.sin()).abs() < 1e-8);
        assert!(!sol.stopped);
    }

    #[test]
    fn dense_output_matches_the_exact_flow_between_nodes() {
        let opts = OdeOptions::default();
        let sol = integrate(harmonic, 0.0, [1.0, 0.0], 6.0, &opts, |_, _| false).unwrap();
        for k in 0..600 {
            let t = 0.01 * k as f64;
            let y = sol.eval(t);
            assert!((y[0] - t.cos()).abs() < 1e-8, "x at t = {t}");
            assert!((y[1] + t.sin()).abs() < 1e-8, "y at t = {t}");
        }
    }

    #[test]
    fn stop_predicate_halts_the_run_early() {
        let opts = OdeOptions::default();
        let sol = integrate(
            |_, y| [y[1], y[0]],
            0.0,
            [1.0, 1.0],
            50.0,
            &opts,
            |_, y| y[0] > 100.0,
        )
        .unwrap();
        assert!(sol.stopped);
        assert!(sol.t_end < 10.0);
        assert!(sol.y_end[0] > 100.0);
    }

    #[test]
    fn rejects_an_empty_horizon() {
        let opts = OdeOptions::default();
        assert!(integrate(harmonic, 1.0, [1.0, 0.0], 1.0, &opts, |_, _| false).is_err());
    }

    #[test]
    fn tightening_tolerances_reduces_the_error() {
        let loose = OdeOptions {
            rtol: 1e-6,
            atol: 1e-6,
            ..OdeOptions::default()
        };
        let tight = OdeOptions {
            rtol: 1e-12,
            atol: 1e-12,
            ..OdeOptions::default()
        };
        let exact = 20.0_f64.cos();
        let run = |o: &OdeOptions| {
            integrate(harmonic, 0.0, [1.0, 0.0], 20.0, o, |_, _| false)
                .unwrap()
                .y_end[0]
        };
        let err_loose = (run(&loose) - exact).abs();
        let err_tight = (run(&tight) - exact).abs();
        assert!(err_tight < err_loose / 100.0);
    }
}
