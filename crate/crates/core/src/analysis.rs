//! Profile diagnostics: decay classification, two-sided decay bounds,
//! stability certificates, tail intersections, and residual measurement.
//!
//! These routines take finished [`RadialProfile`](crate::profile::RadialProfile)
//! data and certify its qualitative behaviour: which of the two admissible
//! decay rates the tail follows, whether the profile respects the two-sided
//! power bounds, whether the linearised operator admits a negative-energy
//! test function (instability witness), and how closely the samples satisfy
//! the radial equation.

use crate::atlas::{self, Params};
use crate::error::{Error, Result};
use crate::fowler::xpow;
use crate::heteroclinic::least_squares;
use crate::profile::{DecayClass, RadialProfile};
use serde::{Deserialize, Serialize};

const LN10: f64 = std::f64::consts::LN_10;

/// Result of fitting the tail decay of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Least-squares slope of `log U` against `log r` over the window.
    pub fitted_exponent: f64,
    /// Log-radius window used for the fit.
    pub window: (f64, f64),
    /// Which admissible decay rate the slope matches, if either.
    pub classification: DecayClass,
    /// Root-mean-square residual of the log-log fit.
    pub fit_residual: f64,
    /// For slow decay, the fitted limit of `U r^{2/(p-1)}`.
    pub tail_constant: Option<f64>,
}

/// Classifies the tail decay of a profile against the two admissible rates.
///
/// Fits `log U` over the last decade of radius and compares the slope with
/// the slow rate `-2/(p-1)` and the fast rate `-(nu_star + nu)`; a match
/// requires 5 percent relative agreement and a log-space fit residual under
/// `1e-3`.  Needs at least two decades of radius.
pub fn classify_decay(profile: &RadialProfile, params: &Params) -> Result<DecayFit> {
    let grid = &profile.log_r_grid;
    let span = grid[grid.len() - 1] - grid[0];
    if span < 2.0 * LN10 {
        return Err(Error::InsufficientGrid {
            have: span,
            need: 2.0 * LN10,
        });
    }
    let t_end = grid[grid.len() - 1];
    let window = (t_end - LN10, t_end);
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .zip(&profile.values)
        .filter(|&(&t, &u)| t >= window.0 && u > 0.0)
        .map(|(&t, &u)| (t, u.ln()))
        .collect();
    if pts.len() < 8 {
        return Err(Error::InsufficientGrid {
            have: pts.len() as f64,
            need: 8.0,
        });
    }
    let (slope, intercept) = least_squares(&pts);
    let residual = (pts
        .iter()
        .map(|&(t, y)| {
            let d = y - (slope * t + intercept);
            d * d
        })
        .sum::<f64>()
        / pts.len() as f64)
        .sqrt();

    let slow = -params.slow_rate();
    let fast = -params.fast_rate();
    let matches = |target: f64| (slope - target).abs() <= 0.05 * target.abs() && residual < 1e-3;
    let classification = if matches(slow) {
        DecayClass::Slow
    } else if matches(fast) {
        DecayClass::Fast
    } else {
        DecayClass::Unclassified
    };

    let tail_constant = if classification == DecayClass::Slow {
        let s = params.slow_rate();
        let mean = grid
            .iter()
            .zip(&profile.values)
            .filter(|&(&t, _)| t >= window.0)
            .map(|(&t, &u)| u * (s * t).exp())
            .sum::<f64>()
            / pts.len() as f64;
        Some(mean)
    } else {
        None
    };

    Ok(DecayFit {
        fitted_exponent: slope,
        window,
        classification,
        fit_residual: residual,
        tail_constant,
    })
}

/// Which end of the domain a two-sided bound check inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundLocation {
    /// Behaviour as `r -> 0`.
    #[serde(rename = "origin")]
    Origin,
    /// Behaviour as `r -> infinity`.
    #[serde(rename = "infinity")]
    Infinity,
}

/// Outcome of the two-sided power-bound check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhragmenReport {
    /// Which end was inspected.
    pub location: BoundLocation,
    /// Whether the fitted exponent landed inside the admissible box.
    pub pass: bool,
    /// Fitted local exponent at the inspected end.
    pub fitted_exponent: f64,
    /// Lower edge of the admissible exponent box `-(nu_star + nu)`.
    pub box_lo: f64,
    /// Upper edge of the admissible exponent box `-(nu_star - nu)`.
    pub box_hi: f64,
    /// Log-radius window used for the fit.
    pub window: (f64, f64),
    /// Sample `(r, U)` at the window edge when the check fails.
    pub violation: Option<(f64, f64)>,
}

/// Checks the two-sided power bounds `r^{-nu_star - nu} <~ U <~
/// r^{-nu_star + nu}` at one end of the domain.
///
/// Any positive solution near an isolated singularity or near infinity must
/// decay with a local exponent inside that box; the check fits the exponent
/// over the outermost decade (or the whole grid if shorter) with a 5 percent
/// slack on the box width.
pub fn phragmen_check(
    profile: &RadialProfile,
    params: &Params,
    location: BoundLocation,
) -> Result<PhragmenReport> {
    let grid = &profile.log_r_grid;
    let (t_lo, t_hi) = match location {
        BoundLocation::Origin => {
            let t0 = grid[0];
            (t0, (t0 + LN10).min(grid[grid.len() - 1]))
        }
        BoundLocation::Infinity => {
            let t1 = grid[grid.len() - 1];
            ((t1 - LN10).max(grid[0]), t1)
        }
    };
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .zip(&profile.values)
        .filter(|&(&t, &u)| t >= t_lo && t <= t_hi && u > 0.0)
        .map(|(&t, &u)| (t, u.ln()))
        .collect();
    if pts.len() < 8 {
        return Err(Error::InsufficientGrid {
            have: pts.len() as f64,
            need: 8.0,
        });
    }
    let (slope, _) = least_squares(&pts);
    let box_lo = -(params.nu_star + params.nu);
    let box_hi = -(params.nu_star - params.nu);
    let slack = 0.05 * (box_hi - box_lo) + 1e-9;
    let pass = slope >= box_lo - slack && slope <= box_hi + slack;
    let violation = if pass {
        None
    } else {
        let idx = match location {
            BoundLocation::Origin => 0,
            BoundLocation::Infinity => grid.len() - 1,
        };
        Some((grid[idx].exp(), profile.values[idx]))
    };
    Ok(PhragmenReport {
        location,
        pass,
        fitted_exponent: slope,
        box_lo,
        box_hi,
        window: (t_lo, t_hi),
        violation,
    })
}

/// Verdict of the variational stability certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertVerdict {
    /// The pointwise Hardy bound certifies nonnegativity of the quadratic
    /// form, hence stability.
    #[serde(rename = "certified-stable")]
    CertifiedStable,
    /// An explicit annulus test function makes the quadratic form negative.
    #[serde(rename = "witness-unstable")]
    WitnessUnstable,
    /// Neither route concluded.
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

/// Annulus test function exhibiting a negative quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessDescription {
    /// Inner radius of the annulus.
    pub r_inner: f64,
    /// Outer radius of the annulus.
    pub r_outer: f64,
    /// Log-radius length of the annulus.
    pub annulus_log_length: f64,
    /// Value of the quadratic form on the unit-ramp test function; negative
    /// values certify instability.
    pub quadratic_form: f64,
}

/// Result of the stability certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    /// Verdict.
    pub verdict: CertVerdict,
    /// Supremum of the scaled linearised potential `p U^{p-1} r^2`.
    pub sup_potential: f64,
    /// Witness data when the verdict is unstable.
    pub witness: Option<WitnessDescription>,
}

/// Certifies stability or instability of the linearisation at a profile.
///
/// Stability route: if `sup p U^{p-1} r^2 <= nu^2`, the Hardy inequality
/// makes the quadratic form nonnegative.  Instability route: when the scaled
/// potential exceeds `nu^2` uniformly on a far annulus, a log-radius ramp
/// `chi` supported there has form value `Q = int (chi')^2 + (nu^2 - P)
/// chi^2 dt`; a negative `Q` is an explicit witness.  Annulus lengths
/// `5, 10, 20, 40, 80` are tried in turn.
pub fn stability_certificate(
    profile: &RadialProfile,
    params: &Params,
) -> Result<StabilityCertificate> {
    let grid = &profile.log_r_grid;
    let h = profile.uniform_spacing()?;
    let n = grid.len();
    let nu_sq = params.nu * params.nu;
    let pm1 = params.p - 1.0;
    let scaled: Vec<f64> = grid
        .iter()
        .zip(&profile.values)
        .map(|(&t, &u)| params.p * xpow(u, pm1) * (2.0 * t).exp())
        .collect();
    let sup_potential = scaled.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));

    if sup_potential <= nu_sq + 1e-12 {
        return Ok(StabilityCertificate {
            verdict: CertVerdict::CertifiedStable,
            sup_potential,
            witness: None,
        });
    }

    // Tail excess of the potential over the Hardy constant.
    let t_end = grid[n - 1];
    let tail_min = grid
        .iter()
        .zip(&scaled)
        .filter(|&(&t, _)| t >= t_end - LN10)
        .fold(f64::INFINITY, |m, (_, &v)| m.min(v));
    let excess = tail_min - nu_sq;
    if excess <= 1e-9 * nu_sq.max(1.0) {
        return Ok(StabilityCertificate {
            verdict: CertVerdict::Inconclusive,
            sup_potential,
            witness: None,
        });
    }

    // Earliest time from which the excess persists at half strength.
    let mut idx_q = n - 1;
    while idx_q > 0 && scaled[idx_q - 1] >= nu_sq + 0.5 * excess {
        idx_q -= 1;
    }
    let t_q = grid[idx_q];

    for length in [5.0, 10.0, 20.0, 40.0, 80.0] {
        let t_a = t_end - length;
        if t_a < t_q || length < 4.0 * h {
            continue;
        }
        let chi = |t: f64| -> f64 {
            let s = t - t_a;
            if s <= 0.0 || s >= length {
                0.0
            } else if s < 1.0 {
                s
            } else if s > length - 1.0 {
                length - s
            } else {
                1.0
            }
        };
        // Ramp energy of chi' is exactly 2; the potential part by trapezoid.
        let mut q = 2.0;
        let mut prev: Option<f64> = None;
        for (&t, &p_val) in grid.iter().zip(&scaled) {
            if t < t_a {
                continue;
            }
            let c = chi(t);
            let integrand = (nu_sq - p_val) * c * c;
            if let Some(last) = prev {
                q += 0.5 * (last + integrand) * h;
            }
            prev = Some(integrand);
        }
        if q < 0.0 {
            return Ok(StabilityCertificate {
                verdict: CertVerdict::WitnessUnstable,
                sup_potential,
                witness: Some(WitnessDescription {
                    r_inner: t_a.exp(),
                    r_outer: t_end.exp(),
                    annulus_log_length: length,
                    quadratic_form: q,
                }),
            });
        }
    }

    Ok(StabilityCertificate {
        verdict: CertVerdict::Inconclusive,
        sup_potential,
        witness: None,
    })
}

/// Locations where two profiles cross in a far tail region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignChangeReport {
    /// Number of sign changes detected.
    pub count: usize,
    /// Radii of the crossings.
    pub locations: Vec<f64>,
    /// Log-radius window inspected.
    pub window: (f64, f64),
}

/// Counts sign changes of `a - b` on the common grid beyond `r_min`.
///
/// The grids must agree node-for-node (within `1e-9`) on the overlap; a dead
/// band of `1e-12` relative to the local magnitude suppresses rounding
/// crossings.  In the oscillatory regime the window must cover at least half
/// an oscillation period, otherwise the count would be meaningless.
pub fn tail_sign_changes(
    a: &RadialProfile,
    b: &RadialProfile,
    r_min: f64,
    params: &Params,
) -> Result<SignChangeReport> {
    if !(r_min > 0.0) || !r_min.is_finite() {
        return Err(Error::InvalidInput(format!(
            "r_min must be positive and finite, got {r_min}"
        )));
    }
    let t_min = r_min.ln();
    let ia = a.log_r_grid.partition_point(|&t| t < t_min - 1e-12);
    let found = b
        .log_r_grid
        .iter()
        .position(|&t| (t - a.log_r_grid.get(ia).copied().unwrap_or(f64::NAN)).abs() <= 1e-9);
    let ib = match found {
        Some(j) => j,
        None => return Err(Error::GridMismatch),
    };
    let len = (a.len() - ia).min(b.len() - ib);
    if len < 4 {
        return Err(Error::InsufficientGrid {
            have: len as f64,
            need: 4.0,
        });
    }
    for k in 0..len {
        if (a.log_r_grid[ia + k] - b.log_r_grid[ib + k]).abs() > 1e-9 {
            return Err(Error::GridMismatch);
        }
    }
    let window = (a.log_r_grid[ia], a.log_r_grid[ia + len - 1]);

    let margin = atlas::stability_margin(params);
    if margin < 0.0 {
        let period = std::f64::consts::PI / (-margin).sqrt();
        let have = window.1 - window.0;
        if have < period {
            return Err(Error::InsufficientGrid {
                have,
                need: period,
            });
        }
    }

    let mut locations = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..len {
        let t = a.log_r_grid[ia + k];
        let ua = a.values[ia + k];
        let ub = b.values[ib + k];
        let d = ua - ub;
        let band = 1e-12 * ua.abs().max(ub.abs());
        if d.abs() <= band {
            continue;
        }
        if let Some((tp, dp)) = prev {
            if (d > 0.0) != (dp > 0.0) {
                let cross = tp + (t - tp) * dp / (dp - d);
                locations.push(cross.exp());
            }
        }
        prev = Some((t, d));
    }
    Ok(SignChangeReport {
        count: locations.len(),
        locations,
        window,
    })
}

/// Scaled residual of a profile against the radial equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Supremum over interior nodes of the scaled residual.
    pub sup_scaled: f64,
    /// Log radius where the worst residual occurred.
    pub worst_log_r: f64,
}

/// Measures how well a profile satisfies the radial equation.
///
/// Transforms to the autonomous frame `w = r^{2/(p-1)} U` and evaluates
/// `w'' + 2 beta w' - gamma w + w^p` with fourth-order centred stencils,
/// scaling each node by the magnitudes of the four terms.  Exact solutions
/// come out at rounding level; the measure is grid-convergent of order four
/// for smooth profiles.
pub fn profile_residual(profile: &RadialProfile, params: &Params) -> Result<ResidualReport> {
    let grid = &profile.log_r_grid;
    let h = profile.uniform_spacing()?;
    let n = grid.len();
    if n < 7 {
        return Err(Error::BadGrid { min: 7 });
    }
    let s = params.slow_rate();
    let w: Vec<f64> = grid
        .iter()
        .zip(&profile.values)
        .map(|(&t, &u)| (s * t).exp() * u)
        .collect();
    let mut sup_scaled = 0.0_f64;
    let mut worst_log_r = grid[0];
    for i in 2..n - 2 {
        let d1 = (-w[i + 2] + 8.0 * w[i + 1] - 8.0 * w[i - 1] + w[i - 2]) / (12.0 * h);
        let d2 = (-w[i + 2] + 16.0 * w[i + 1] - 30.0 * w[i] + 16.0 * w[i - 1] - w[i - 2])
            / (12.0 * h * h);
        let pow = xpow(w[i], params.p);
        let res = d2 + 2.0 * params.beta * d1 - params.gamma * w[i] + pow;
        let scale = d2.abs()
            + (2.0 * params.beta * d1).abs()
            + (params.gamma * w[i]).abs()
            + pow
            + 1e-300;
        let scaled = res.abs() / scale;
        if scaled > sup_scaled {
            sup_scaled = scaled;
            worst_log_r = grid[i];
        }
    }
    Ok(ResidualReport {
        sup_scaled,
        worst_log_r,
    })
}
