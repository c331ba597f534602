//! Radial profiles sampled on logarithmic grids.

use crate::atlas::{self, Params};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Decay branch of a positive radial solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayClass {
    /// Tail `~ C r^{-2/(p-1)}` with the singular-solution constant.
    #[serde(rename = "slow")]
    Slow,
    /// Tail `~ c r^{-(nu_star + nu)}`.
    #[serde(rename = "fast")]
    Fast,
    /// Not yet classified, or no branch matched.
    #[serde(rename = "unclassified")]
    Unclassified,
}

impl fmt::Display for DecayClass {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let label = match self {
            DecayClass::Slow => "slow",
            DecayClass::Fast => "fast",
            DecayClass::Unclassified => "unclassified",
        };
        f.write_str(label)
    }
}

/// A positive radial function sampled on a grid of `log r` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    /// Strictly increasing sample points in `t = log r`.
    pub log_r_grid: Vec<f64>,
    /// Function values `U(r)` at the sample points.
    pub values: Vec<f64>,
    /// Family parameter that generated the profile, when applicable; the
    /// singular solution carries `Some(inf)`.
    #[serde(with = "crate::extreal::option", default)]
    pub lambda: Option<f64>,
    /// Decay branch metadata.
    pub decay_class: DecayClass,
}

impl RadialProfile {
    /// Validates grid and values and assembles a profile.
    ///
    /// Values must be finite and nonnegative, and strictly positive away from
    /// the endpoints (exterior problems may pin a boundary value to zero).
    pub fn from_samples(
        log_r_grid: Vec<f64>,
        values: Vec<f64>,
        lambda: Option<f64>,
        decay_class: DecayClass,
    ) -> Result<Self> {
        if log_r_grid.len() < 2 || log_r_grid.len() != values.len() {
            return Err(Error::BadGrid { min: 2 });
        }
        for pair in log_r_grid.windows(2) {
            if !pair[0].is_finite() || !(pair[1] > pair[0]) {
                return Err(Error::BadGrid { min: 2 });
            }
        }
        let last = values.len() - 1;
        for (i, &v) in values.iter().enumerate() {
            let interior = i != 0 && i != last;
            if !v.is_finite() || v < 0.0 || (interior && v == 0.0) {
                return Err(Error::BadProfileValue { index: i, value: v });
            }
        }
        Ok(RadialProfile {
            log_r_grid,
            values,
            lambda,
            decay_class,
        })
    }

    /// The singular solution `C r^{-2/(p-1)}` sampled on `t_grid`.
    pub fn singular(params: &Params, t_grid: Vec<f64>) -> Result<Self> {
        let c = atlas::singular_coefficient(params)?;
        let s = params.slow_rate();
        let values = t_grid.iter().map(|&t| c * (-s * t).exp()).collect();
        Self::from_samples(t_grid, values, Some(f64::INFINITY), DecayClass::Slow)
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the profile holds no samples.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Radii `r = e^t` of the sample points.
    pub fn r_grid(&self) -> Vec<f64> {
        self.log_r_grid.iter().map(|&t| t.exp()).collect()
    }

    /// Grid spacing, provided the grid is uniform.
    pub fn uniform_spacing(&self) -> Result<f64> {
        let t = &self.log_r_grid;
        if t.len() < 2 {
            return Err(Error::BadGrid { min: 2 });
        }
        let h = t[1] - t[0];
        let scale = t.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
        let tol = 1e-6 * h.abs() + 1e-13 * scale.max(1.0);
        for pair in t.windows(2) {
            if ((pair[1] - pair[0]) - h).abs() > tol {
                return Err(Error::InvalidInput(
                    "operation requires a uniform log-radius grid".into(),
                ));
            }
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_and_nonmonotone_grids() {
        assert!(RadialProfile::from_samples(
            vec![0.0, 1.0],
            vec![1.0],
            None,
            DecayClass::Unclassified
        )
        .is_err());
        assert!(RadialProfile::from_samples(
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
            None,
            DecayClass::Unclassified
        )
        .is_err());
    }

    #[test]
    fn rejects_interior_zeros_but_allows_boundary_zeros() {
        assert!(RadialProfile::from_samples(
            vec![0.0, 1.0, 2.0],
            vec![0.0, 1.0, 0.0],
            None,
            DecayClass::Unclassified
        )
        .is_ok());
        assert!(RadialProfile::from_samples(
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            None,
            DecayClass::Unclassified
        )
        .is_err());
    }

    #[test]
    fn singular_profile_scales_like_the_slow_power() {
        let params = Params::new(15, 6.5, 3.0).unwrap();
        let grid: Vec<f64> = (0..50).map(|i| 0.1 * i as f64).collect();
        let profile = RadialProfile::singular(&params, grid).unwrap();
        let c = atlas::singular_coefficient(&params).unwrap();
        for (t, u) in profile.log_r_grid.iter().zip(&profile.values) {
            let scaled = u * (params.slow_rate() * t).exp();
            assert!((scaled - c).abs() < 1e-12 * c);
        }
        assert_eq!(profile.lambda, Some(f64::INFINITY));
    }

    #[test]
    fn uniform_spacing_detects_jitter() {
        let good = RadialProfile::from_samples(
            (0..10).map(|i| 0.25 * i as f64).collect(),
            vec![1.0; 10],
            None,
            DecayClass::Unclassified,
        )
        .unwrap();
        assert!((good.uniform_spacing().unwrap() - 0.25).abs() < 1e-15);
        let mut t: Vec<f64> = (0..10).map(|i| 0.25 * i as f64).collect();
        t[5] += 0.01;
        let bad = RadialProfile::from_samples(t, vec![1.0; 10], None, DecayClass::Unclassified)
            .unwrap();
        assert!(bad.uniform_spacing().is_err());
    }

    #[test]
    fn profile_with_infinite_lambda_round_trips_through_json() {
        let params = Params::new(5, 1.5, 5.0).unwrap();
        let profile = RadialProfile::singular(&params, vec![0.0, 0.5, 1.0]).unwrap();
        let json = serde_json::to_string(&profile).unwrap();
        let back: RadialProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, profile);
    }
}
