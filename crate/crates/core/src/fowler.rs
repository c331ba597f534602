//! Autonomous phase-plane form of the radial equation.
//!
//! Substituting `w(t) = r^{2/(p-1)} U(r)`, `t = log r` turns the radial
//! equation into the damped system
//!
//! ```text
//! x' = y
//! y' = -2 beta y + gamma x - x^p
//! ```
//!
//! whose rest points are the origin and the attractor `(gamma^{1/(p-1)}, 0)`.
//! This module supplies the vector field, the equilibria, the linearisations
//! at both rest points, the Lyapunov energy, and the transforms between
//! radial profiles and phase trajectories.

use crate::atlas::{self, Params};
use crate::error::{Error, Result};
use crate::heteroclinic::PhaseTrajectory;
use crate::profile::{DecayClass, RadialProfile};
use serde::{Deserialize, Serialize};

/// Relative tolerance under which `beta` is treated as exactly zero.
pub(crate) const BETA_ZERO_TOL: f64 = 1e-12;

/// A point of the phase plane: amplitude `x` and its log-radius derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    /// Scaled amplitude `w = r^{2/(p-1)} U`.
    pub x: f64,
    /// Derivative `w' = dw/dt`.
    pub y: f64,
}

/// A real/imaginary pair for eigenvalues that may leave the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReIm {
    /// Real part.
    pub re: f64,
    /// Imaginary part; zero for real eigenvalues.
    pub im: f64,
}

/// Qualitative type of the attractor `(gamma^{1/(p-1)}, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttractorType {
    /// Real contracting eigenvalues: monotone approach.
    #[serde(rename = "node")]
    Node,
    /// Complex contracting eigenvalues: oscillatory approach.
    #[serde(rename = "focus")]
    Focus,
    /// Zero damping (`p` equal to the Sobolev exponent): closed orbits.
    #[serde(rename = "center")]
    Center,
    /// Negative damping (`p` below the Sobolev exponent): orbits leave.
    #[serde(rename = "repeller")]
    Repeller,
}

/// Linearisation data at the two rest points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenData {
    /// Unstable eigenvalue `-beta + nu` at the origin.
    pub alpha_plus: f64,
    /// Stable eigenvalue `-beta - nu` at the origin.
    pub alpha_minus: f64,
    /// Eigenvector `(1, alpha_plus)` of the origin linearisation.
    pub eigvec_plus: [f64; 2],
    /// Eigenvector `(1, alpha_minus)` of the origin linearisation.
    pub eigvec_minus: [f64; 2],
    /// Leading eigenvalue `-beta + sqrt(nu^2 - p gamma)` at the attractor.
    pub alpha_star_plus: ReIm,
    /// Trailing eigenvalue `-beta - sqrt(nu^2 - p gamma)` at the attractor.
    pub alpha_star_minus: ReIm,
    /// Spiral frequency `sqrt(p gamma - nu^2)` when the margin is negative.
    pub omega_spiral: Option<f64>,
    /// Qualitative type of the attractor.
    pub attractor_type: AttractorType,
}

/// `x^q` extended by zero to nonpositive `x`.
///
/// The phase flow keeps `x` positive on the orbits studied here; the
/// extension only protects transient evaluations near the origin.
pub fn xpow(x: f64, q: f64) -> f64 {
    if x > 0.0 {
        x.powf(q)
    } else {
        0.0
    }
}

/// Right-hand side of the phase system at `state`.
pub fn vector_field(state: PhaseState, params: &Params) -> PhaseState {
    PhaseState {
        x: state.y,
        y: -2.0 * params.beta * state.y + params.gamma * state.x - xpow(state.x, params.p),
    }
}

/// Rest points of the phase system: the origin, and the attractor whenever
/// `gamma > 0`.
pub fn equilibria(params: &Params) -> Vec<PhaseState> {
    let mut points = vec![PhaseState { x: 0.0, y: 0.0 }];
    if params.gamma > 0.0 {
        if let Ok(c) = atlas::singular_coefficient(params) {
            points.push(PhaseState { x: c, y: 0.0 });
        }
    }
    points
}

/// Eigenvalues and eigenvectors of the linearisations at both rest points.
///
/// Requires `gamma > 0` so that the attractor exists.  The attractor type is
/// decided by the damping sign and by the margin `nu^2 - p gamma` computed by
/// [`atlas::stability_margin`], keeping it consistent with the stability
/// verdict down to the last bit.
pub fn eigen_analysis(params: &Params) -> Result<EigenData> {
    if params.gamma <= 0.0 {
        return Err(Error::NonPositiveGamma(params.gamma));
    }
    let alpha_plus = -params.beta + params.nu;
    let alpha_minus = -params.beta - params.nu;
    let margin = atlas::stability_margin(params);

    let (star_plus, star_minus, omega) = if margin >= 0.0 {
        let root = margin.sqrt();
        (
            ReIm {
                re: -params.beta + root,
                im: 0.0,
            },
            ReIm {
                re: -params.beta - root,
                im: 0.0,
            },
            None,
        )
    } else {
        let omega = (-margin).sqrt();
        (
            ReIm {
                re: -params.beta,
                im: omega,
            },
            ReIm {
                re: -params.beta,
                im: -omega,
            },
            Some(omega),
        )
    };

    let beta_scale = params.nu_star.max(1.0);
    let attractor_type = if params.beta.abs() <= BETA_ZERO_TOL * beta_scale {
        AttractorType::Center
    } else if params.beta < 0.0 {
        AttractorType::Repeller
    } else if margin >= 0.0 {
        AttractorType::Node
    } else {
        AttractorType::Focus
    };

    Ok(EigenData {
        alpha_plus,
        alpha_minus,
        eigvec_plus: [1.0, alpha_plus],
        eigvec_minus: [1.0, alpha_minus],
        alpha_star_plus: star_plus,
        alpha_star_minus: star_minus,
        omega_spiral: omega,
        attractor_type,
    })
}

/// Lyapunov energy `y^2/2 - gamma x^2/2 + x^{p+1}/(p+1)`.
pub fn lyapunov_energy(state: PhaseState, params: &Params) -> f64 {
    0.5 * state.y * state.y - 0.5 * params.gamma * state.x * state.x
        + xpow(state.x, params.p + 1.0) / (params.p + 1.0)
}

/// Time derivative `-2 beta y^2` of the Lyapunov energy along the flow.
pub fn energy_dissipation(state: PhaseState, params: &Params) -> f64 {
    -2.0 * params.beta * state.y * state.y
}

/// Energy of the attractor, `gamma^{(p+1)/(p-1)} (1/(p+1) - 1/2)`.
pub fn attractor_energy(params: &Params) -> Result<f64> {
    if params.gamma <= 0.0 {
        return Err(Error::NonPositiveGamma(params.gamma));
    }
    Ok(params.gamma.powf((params.p + 1.0) / (params.p - 1.0))
        * (1.0 / (params.p + 1.0) - 0.5))
}

/// Transforms a radial profile on a uniform log grid into a phase trajectory.
///
/// The derivative component is reconstructed with fourth-order centred
/// differences (one-sided at the edges), so the grid must be uniform and hold
/// at least five nodes.
pub fn fowler_forward(params: &Params, profile: &RadialProfile) -> Result<PhaseTrajectory> {
    let t = &profile.log_r_grid;
    let h = profile.uniform_spacing()?;
    if t.len() < 5 {
        return Err(Error::BadGrid { min: 5 });
    }
    let s = params.slow_rate();
    let w: Vec<f64> = t
        .iter()
        .zip(&profile.values)
        .map(|(&ti, &ui)| (s * ti).exp() * ui)
        .collect();

    let n = w.len();
    let mut states = Vec::with_capacity(n);
    for i in 0..n {
        let y = if i >= 2 && i + 2 < n {
            (-w[i + 2] + 8.0 * w[i + 1] - 8.0 * w[i - 1] + w[i - 2]) / (12.0 * h)
        } else if i + 4 < n && i < 2 {
            (-25.0 * w[i] + 48.0 * w[i + 1] - 36.0 * w[i + 2] + 16.0 * w[i + 3]
                - 3.0 * w[i + 4])
                / (12.0 * h)
        } else {
            (25.0 * w[i] - 48.0 * w[i - 1] + 36.0 * w[i - 2] - 16.0 * w[i - 3]
                + 3.0 * w[i - 4])
                / (12.0 * h)
        };
        states.push(PhaseState { x: w[i], y });
    }

    Ok(PhaseTrajectory {
        t_grid: t.clone(),
        states,
        normalization_shift: 0.0,
        approach: None,
    })
}

/// Transforms a phase trajectory back into a radial profile.
pub fn fowler_inverse(params: &Params, traj: &PhaseTrajectory) -> Result<RadialProfile> {
    let s = params.slow_rate();
    let values: Vec<f64> = traj
        .t_grid
        .iter()
        .zip(&traj.states)
        .map(|(&ti, st)| (-s * ti).exp() * st.x)
        .collect();
    RadialProfile::from_samples(traj.t_grid.clone(), values, None, DecayClass::Unclassified)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, nu: f64, p: f64) -> Params {
        Params::new(n, nu, p).unwrap()
    }

    #[test]
    fn equilibria_annihilate_the_vector_field() {
        let pr = params(5, 1.5, 5.0);
        for eq in equilibria(&pr) {
            let f = vector_field(eq, &pr);
            assert!(f.x.abs() < 1e-14 && f.y.abs() < 1e-13, "at {eq:?}");
        }
    }

    #[test]
    fn origin_eigenpairs_solve_the_linearisation() {
        let pr = params(11, 4.5, 10.0);
        let eig = eigen_analysis(&pr).unwrap();
        for (alpha, vec) in [
            (eig.alpha_plus, eig.eigvec_plus),
            (eig.alpha_minus, eig.eigvec_minus),
        ] {
            let ax = vec[1];
            let ay = pr.gamma * vec[0] - 2.0 * pr.beta * vec[1];
            assert!((ax - alpha * vec[0]).abs() < 1e-12);
            assert!((ay - alpha * vec[1]).abs() < 1e-11);
        }
    }

    #[test]
    fn attractor_types_follow_damping_and_margin() {
        assert_eq!(
            eigen_analysis(&params(5, 1.5, 5.0)).unwrap().attractor_type,
            AttractorType::Focus
        );
        assert_eq!(
            eigen_analysis(&params(15, 6.5, 3.0)).unwrap().attractor_type,
            AttractorType::Node
        );
        let sobolev = params(4, 1.0, 3.0);
        assert_eq!(
            eigen_analysis(&sobolev).unwrap().attractor_type,
            AttractorType::Center
        );
        let sub = params(5, 1.5, 2.0);
        assert_eq!(
            eigen_analysis(&sub).unwrap().attractor_type,
            AttractorType::Repeller
        );
    }

    #[test]
    fn spiral_frequency_squares_to_minus_margin() {
        let pr = params(5, 1.5, 5.0);
        let eig = eigen_analysis(&pr).unwrap();
        let omega = eig.omega_spiral.unwrap();
        assert!((omega - 2.0).abs() < 1e-14);
        assert_eq!(eig.alpha_star_plus.re, -pr.beta);
        assert_eq!(eig.alpha_star_plus.im, omega);
    }

    #[test]
    fn energy_decays_at_rate_minus_two_beta_y_squared() {
        let pr = params(15, 6.5, 3.0);
        let st = PhaseState { x: 1.7, y: -0.4 };
        let f = vector_field(st, &pr);
        let grad_dot_f = (-pr.gamma * st.x + xpow(st.x, pr.p)) * f.x + st.y * f.y;
        assert!((grad_dot_f - energy_dissipation(st, &pr)).abs() < 1e-12);
    }

    #[test]
    fn attractor_energy_matches_direct_evaluation() {
        let pr = params(5, 1.5, 5.0);
        let c = atlas::singular_coefficient(&pr).unwrap();
        let direct = lyapunov_energy(PhaseState { x: c, y: 0.0 }, &pr);
        assert!((attractor_energy(&pr).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn forward_and_inverse_transforms_are_mutually_inverse() {
        let pr = params(15, 6.5, 3.0);
        let t: Vec<f64> = (0..400).map(|i| -2.0 + 0.01 * i as f64).collect();
        let values: Vec<f64> = t
            .iter()
            .map(|&ti| (-pr.slow_rate() * ti).exp() * (1.0 + 0.3 * (0.5 * ti).tanh()))
            .collect();
        let profile =
            RadialProfile::from_samples(t, values, None, DecayClass::Unclassified).unwrap();
        let traj = fowler_forward(&pr, &profile).unwrap();
        let back = fowler_inverse(&pr, &traj).unwrap();
        for (a, b) in profile.values.iter().zip(&back.values) {
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
    }
}
