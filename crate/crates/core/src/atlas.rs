//! Critical exponents and stability classification for the singular solution.
//!
//! For dimension `N >= 3`, Hardy index `nu > 0`, and exponent `p > 1`, the
//! equation `-Δu + (nu^2 - nu_star^2) |x|^{-2} u = u^p` with
//! `nu_star = (N - 2)/2` admits the explicit singular solution
//! `U_inf = C r^{-2/(p-1)}` exactly when `gamma = nu^2 - beta^2 > 0`, where
//! `beta = nu_star - 2/(p-1)` and `C^{p-1} = gamma`.  This module computes the
//! critical exponents that organise the parameter plane and decides linearised
//! stability of `U_inf` both from the eigenvalue inequality `p gamma <= nu^2`
//! and from the interval description of the stable set, so the two routes can
//! be cross-checked.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Absolute tolerance used to detect a coincident root pair of the cubic.
const TOL_ROOT: f64 = 1e-12;

/// Problem parameters together with the derived Fowler constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Spatial dimension, at least 3.
    pub n: u32,
    /// Hardy index nu > 0; the potential coefficient is nu^2 - nu_star^2.
    pub nu: f64,
    /// Nonlinearity exponent p > 1.
    pub p: f64,
    /// (N - 2) / 2.
    pub nu_star: f64,
    /// Potential coefficient nu^2 - nu_star^2 (any sign).
    pub mu: f64,
    /// Fowler damping nu_star - 2/(p - 1) (any sign).
    pub beta: f64,
    /// nu^2 - beta^2; positive exactly when p_lower < p < p_upper.
    pub gamma: f64,
}

impl Params {
    /// Validates `(n, nu, p)` and computes the derived constants.
    pub fn new(n: u32, nu: f64, p: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionTooSmall(n));
        }
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Error::BadNu(nu));
        }
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::BadExponent(p));
        }
        let nu_star = (n as f64 - 2.0) / 2.0;
        let beta = nu_star - 2.0 / (p - 1.0);
        Ok(Params {
            n,
            nu,
            p,
            nu_star,
            mu: (nu - nu_star) * (nu + nu_star),
            beta,
            gamma: (nu - beta) * (nu + beta),
        })
    }

    /// Decay rate 2/(p - 1) of the slow branch, as a positive number.
    pub fn slow_rate(&self) -> f64 {
        2.0 / (self.p - 1.0)
    }

    /// Decay rate nu_star + nu of the fast branch, as a positive number.
    pub fn fast_rate(&self) -> f64 {
        self.nu_star + self.nu
    }
}

/// Stability margin `nu^2 - p gamma` of the singular solution.
///
/// Nonnegative exactly when `U_inf` is linearised stable.  Every consumer of
/// the sign (the verdict, the eigenvalue discriminant, the spiral test) goes
/// through this single expression so that verdicts agree bit for bit.
pub fn stability_margin(params: &Params) -> f64 {
    params.nu * params.nu - params.p * params.gamma
}

/// Slack under which the stability margin counts as zero.
///
/// Boundary exponents computed by root-finding land within a few ulps of the
/// exact threshold, so the margin of a nominally borderline triple can carry
/// either sign in floating point.  Every consumer of the margin sign (the
/// verdict, the approach predictor, the rate fit) applies this single slack
/// so that their answers cannot disagree across modules.
pub fn margin_boundary_tol(params: &Params) -> f64 {
    1e-10 * (params.nu * params.nu).max(1.0)
}

/// Amplitude `C = gamma^{1/(p-1)}` of the singular solution `C r^{-2/(p-1)}`.
pub fn singular_coefficient(params: &Params) -> Result<f64> {
    if params.gamma <= 0.0 {
        return Err(Error::NonPositiveGamma(params.gamma));
    }
    Ok(params.gamma.powf(1.0 / (params.p - 1.0)))
}

/// The three existence-range exponents attached to `(n, nu)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentBounds {
    /// Lower existence exponent 1 + 2/(nu_star + nu).
    pub p_lower: f64,
    /// Sobolev exponent (N + 2)/(N - 2).
    pub p_sobolev: f64,
    /// Upper existence exponent 1 + 2/(nu_star - nu) for nu < nu_star,
    /// infinite otherwise.
    #[serde(with = "crate::extreal")]
    pub p_upper: f64,
}

/// Computes the existence range `(p_lower, p_upper)` and the Sobolev exponent.
pub fn exponent_bounds(n: u32, nu: f64) -> Result<ExponentBounds> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    if !nu.is_finite() || nu <= 0.0 {
        return Err(Error::BadNu(nu));
    }
    let nu_star = (n as f64 - 2.0) / 2.0;
    let p_upper = if nu < nu_star {
        1.0 + 2.0 / (nu_star - nu)
    } else {
        f64::INFINITY
    };
    Ok(ExponentBounds {
        p_lower: 1.0 + 2.0 / (nu_star + nu),
        p_sobolev: (n as f64 + 2.0) / (n as f64 - 2.0),
        p_upper,
    })
}

/// Threshold index `nu_bar = sqrt((2/27) (2 + nu_star)^3)`.
///
/// Satisfies `nu_bar >= nu_star` with equality only at N = 10; above it the
/// cubic has no upper roots.
pub fn nu_bar(n: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    let nu_star = (n as f64 - 2.0) / 2.0;
    let c = 2.0 + nu_star;
    Ok((2.0 / 27.0 * c * c * c).sqrt())
}

/// The cubic `theta(s) = (s + nu_star)^2 (s - 2)` steering the upper roots.
pub fn theta(s: f64, nu_star: f64) -> f64 {
    let q = s + nu_star;
    q * q * (s - 2.0)
}

/// Closed-form stability threshold for the pure Laplacian (`nu = nu_star`):
/// `1 + 4/(N - 4 - 2 sqrt(N - 1))` for N >= 11, infinite below.
pub fn joseph_lundgren(n: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    if n < 11 {
        return Ok(f64::INFINITY);
    }
    let nf = n as f64;
    Ok(1.0 + 4.0 / (nf - 4.0 - 2.0 * (nf - 1.0).sqrt()))
}

/// Root pattern of `theta(s) = -2 nu^2`, split by dimension and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThetaCase {
    /// N <= 10, nu >= nu_star: only the sharp root below -nu_star.
    #[serde(rename = "low-i")]
    LowI,
    /// N <= 10, nu < nu_star: one upper root sigma_minus.
    #[serde(rename = "low-ii")]
    LowII,
    /// N >= 11, nu > nu_bar: only the sharp root.
    #[serde(rename = "high-i")]
    HighI,
    /// N >= 11, nu_star < nu <= nu_bar: upper roots sigma_minus <= sigma_plus.
    #[serde(rename = "high-ii")]
    HighII,
    /// N >= 11, nu <= nu_star: one upper root sigma_minus.
    #[serde(rename = "high-iii")]
    HighIII,
}

impl fmt::Display for ThetaCase {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let label = match self {
            ThetaCase::LowI => "low-i",
            ThetaCase::LowII => "low-ii",
            ThetaCase::HighI => "high-i",
            ThetaCase::HighII => "high-ii",
            ThetaCase::HighIII => "high-iii",
        };
        f.write_str(label)
    }
}

/// Roots of `theta(s) = -2 nu^2` relevant to stability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaRoots {
    /// The unique root in `(-nu_star - nu, -nu_star)`; always present.
    pub sigma_sharp: f64,
    /// Lower root in `(-nu_star, 0)` when the case admits one.
    pub sigma_minus: Option<f64>,
    /// Upper root in `(-nu_star, 0)`; present only in case high-ii.
    pub sigma_plus: Option<f64>,
    /// Which branch pattern applies.
    pub case: ThetaCase,
    /// True when the upper roots collapse to the double root at nu = nu_bar.
    pub coincident: bool,
}

/// Locates every root of `theta(s) = -2 nu^2` on `(-nu_star - nu, 0)`.
pub fn theta_roots(n: u32, nu: f64) -> Result<ThetaRoots> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    if !nu.is_finite() || nu <= 0.0 {
        return Err(Error::BadNu(nu));
    }
    let nu_star = (n as f64 - 2.0) / 2.0;
    let f = |s: f64| theta(s, nu_star) + 2.0 * nu * nu;
    let sigma_sharp = brent_root(&f, -nu_star - nu, -nu_star)?;

    let s_min = -(nu_star - 4.0) / 3.0;
    let bar = nu_bar(n)?;
    let (case, sigma_minus, sigma_plus, coincident) = if n <= 10 {
        if nu >= nu_star {
            (ThetaCase::LowI, None, None, false)
        } else {
            let root = brent_root(&f, -nu_star, 0.0)?;
            (ThetaCase::LowII, Some(root), None, false)
        }
    } else if nu > bar {
        (ThetaCase::HighI, None, None, false)
    } else if nu > nu_star {
        if f(s_min) >= -TOL_ROOT {
            (ThetaCase::HighII, Some(s_min), Some(s_min), true)
        } else {
            let lo = brent_root(&f, -nu_star, s_min)?;
            let hi = brent_root(&f, s_min, 0.0)?;
            (ThetaCase::HighII, Some(lo), Some(hi), false)
        }
    } else {
        let root = brent_root(&f, -nu_star, s_min)?;
        (ThetaCase::HighIII, Some(root), None, false)
    };

    Ok(ThetaRoots {
        sigma_sharp,
        sigma_minus,
        sigma_plus,
        case,
        coincident,
    })
}

/// Stability exponents obtained from the cubic roots via `p = 1 - 2/sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityExponents {
    /// Image of `sigma_sharp`; always in `(p_lower, p_sobolev)`.
    pub p_sharp: f64,
    /// Image of `sigma_minus` when present; always above `p_sobolev`.
    pub p_minus: Option<f64>,
    /// Image of `sigma_plus` when present.
    pub p_plus: Option<f64>,
    /// Root data the exponents were derived from.
    pub roots: ThetaRoots,
}

/// Maps the cubic roots to exponents through `p = 1 - 2/sigma`.
pub fn stability_exponents(n: u32, nu: f64) -> Result<StabilityExponents> {
    let roots = theta_roots(n, nu)?;
    let map = |s: f64| 1.0 - 2.0 / s;
    Ok(StabilityExponents {
        p_sharp: map(roots.sigma_sharp),
        p_minus: roots.sigma_minus.map(map),
        p_plus: roots.sigma_plus.map(map),
        roots,
    })
}

/// Which interval pattern describes the stable exponent set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityCase {
    /// Two bounded intervals `(p_lower, p_sharp]` and `[p_minus, p_plus]`.
    #[serde(rename = "a")]
    A,
    /// `(p_lower, p_sharp]` and the half-open `[p_minus, p_upper)`.
    #[serde(rename = "b")]
    B,
    /// The single interval `(p_lower, p_sharp]`.
    #[serde(rename = "c")]
    C,
}

impl fmt::Display for StabilityCase {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let label = match self {
            StabilityCase::A => "a",
            StabilityCase::B => "b",
            StabilityCase::C => "c",
        };
        f.write_str(label)
    }
}

/// An exponent interval with individually open or closed endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PInterval {
    /// Left endpoint.
    pub lo: f64,
    /// Whether the left endpoint belongs to the interval.
    pub lo_closed: bool,
    /// Right endpoint; may be infinite.
    #[serde(with = "crate::extreal")]
    pub hi: f64,
    /// Whether the right endpoint belongs to the interval.
    pub hi_closed: bool,
}

impl PInterval {
    /// Membership test honouring the endpoint conventions.
    pub fn contains(&self, p: f64) -> bool {
        let left = if self.lo_closed {
            p >= self.lo
        } else {
            p > self.lo
        };
        let right = if self.hi_closed {
            p <= self.hi
        } else {
            p < self.hi
        };
        left && right
    }
}

impl fmt::Display for PInterval {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{}{}, {}{}", open, self.lo, self.hi, close)
    }
}

/// Full exponent atlas for one `(n, nu)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    /// Spatial dimension.
    pub n: u32,
    /// Hardy index.
    pub nu: f64,
    /// Lower existence exponent.
    pub p_lower: f64,
    /// Sobolev exponent.
    pub p_sobolev: f64,
    /// Upper existence exponent; infinite for nu >= nu_star.
    #[serde(with = "crate::extreal")]
    pub p_upper: f64,
    /// Sharp root of the cubic.
    pub sigma_sharp: f64,
    /// Lower upper-branch root when present.
    pub sigma_minus: Option<f64>,
    /// Upper upper-branch root when present.
    pub sigma_plus: Option<f64>,
    /// Stability exponent below the Sobolev exponent.
    pub p_sharp: f64,
    /// Lower supercritical stability exponent when present.
    pub p_minus: Option<f64>,
    /// Upper supercritical stability exponent when present.
    pub p_plus: Option<f64>,
    /// Threshold index separating cases high-i and high-ii.
    pub nu_bar: f64,
    /// Stable exponent set as a union of intervals.
    pub stability_intervals: Vec<PInterval>,
    /// Which interval pattern applies.
    pub lemma2_case: StabilityCase,
    /// Root pattern of the cubic.
    pub theta_case: ThetaCase,
}

/// Assembles the complete exponent atlas for `(n, nu)`.
pub fn exponent_report(n: u32, nu: f64) -> Result<ExponentReport> {
    let bounds = exponent_bounds(n, nu)?;
    let exps = stability_exponents(n, nu)?;
    let bar = nu_bar(n)?;

    let case = match exps.roots.case {
        ThetaCase::HighII => StabilityCase::A,
        ThetaCase::LowII | ThetaCase::HighIII => StabilityCase::B,
        ThetaCase::LowI | ThetaCase::HighI => StabilityCase::C,
    };

    let head = PInterval {
        lo: bounds.p_lower,
        lo_closed: false,
        hi: exps.p_sharp,
        hi_closed: true,
    };
    let mut intervals = vec![head];
    match case {
        StabilityCase::A => intervals.push(PInterval {
            lo: exps.p_minus.expect("case a has p_minus"),
            lo_closed: true,
            hi: exps.p_plus.expect("case a has p_plus"),
            hi_closed: true,
        }),
        StabilityCase::B => intervals.push(PInterval {
            lo: exps.p_minus.expect("case b has p_minus"),
            lo_closed: true,
            hi: bounds.p_upper,
            hi_closed: false,
        }),
        StabilityCase::C => {}
    }

    Ok(ExponentReport {
        n,
        nu,
        p_lower: bounds.p_lower,
        p_sobolev: bounds.p_sobolev,
        p_upper: bounds.p_upper,
        sigma_sharp: exps.roots.sigma_sharp,
        sigma_minus: exps.roots.sigma_minus,
        sigma_plus: exps.roots.sigma_plus,
        p_sharp: exps.p_sharp,
        p_minus: exps.p_minus,
        p_plus: exps.p_plus,
        nu_bar: bar,
        stability_intervals: intervals,
        lemma2_case: case,
        theta_case: exps.roots.case,
    })
}

/// Verdict of the stability classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeVerdict {
    /// The singular solution is linearised stable; the family is ordered.
    #[serde(rename = "stable")]
    Stable,
    /// The singular solution is unstable; profiles oscillate around it.
    #[serde(rename = "unstable")]
    Unstable,
    /// `p` falls outside `(p_lower, p_upper)`: no positive singular solution.
    #[serde(rename = "outside-range")]
    OutsideRange,
}

impl fmt::Display for RegimeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let label = match self {
            RegimeVerdict::Stable => "stable",
            RegimeVerdict::Unstable => "unstable",
            RegimeVerdict::OutsideRange => "outside-range",
        };
        f.write_str(label)
    }
}

/// Outcome of classifying one `(n, nu, p)` triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Stable, unstable, or outside the existence range.
    pub verdict: RegimeVerdict,
    /// `nu^2 - p gamma`; the verdict is its sign, up to a boundary tolerance
    /// of `1e-10 max(1, nu^2)` so that closed interval endpoints computed by
    /// root-finding classify as stable.
    pub margin: f64,
    /// `p gamma`, the linearised potential strength at the singular solution.
    pub p_gamma: f64,
    /// `nu^2`, the coercivity threshold.
    pub nu_sq: f64,
    /// Whether `p` belongs to the stable interval set.
    pub in_stable_interval: bool,
    /// Interval pattern of the `(n, nu)` slice.
    pub lemma2_case: StabilityCase,
    /// True when the margin sign and the interval membership agree.
    pub dual_agrees: bool,
}

/// Classifies the singular solution at `params` by the margin sign, and
/// cross-checks the verdict against the stability intervals.
pub fn classify_singular_stability(params: &Params) -> Result<StabilityReport> {
    let report = exponent_report(params.n, params.nu)?;
    let nu_sq = params.nu * params.nu;

    if params.gamma <= 0.0 {
        return Ok(StabilityReport {
            verdict: RegimeVerdict::OutsideRange,
            margin: stability_margin(params),
            p_gamma: params.p * params.gamma,
            nu_sq,
            in_stable_interval: false,
            lemma2_case: report.lemma2_case,
            dual_agrees: true,
        });
    }

    let margin = stability_margin(params);
    let stable = margin >= -margin_boundary_tol(params);
    let member = report
        .stability_intervals
        .iter()
        .any(|iv| iv.contains(params.p));
    Ok(StabilityReport {
        verdict: if stable {
            RegimeVerdict::Stable
        } else {
            RegimeVerdict::Unstable
        },
        margin,
        p_gamma: params.p * params.gamma,
        nu_sq,
        in_stable_interval: member,
        lemma2_case: report.lemma2_case,
        dual_agrees: stable == member,
    })
}

/// Brent root bracketing on `[a, b]`, run to machine precision.
fn brent_root<F: Fn(f64) -> f64>(f: F, x1: f64, x2: f64) -> Result<f64> {
    const ITMAX: usize = 200;
    let mut a = x1;
    let mut b = x2;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidInput(format!(
            "bracket [{a}, {b}] does not straddle a sign change"
        )));
    }
    let mut c = b;
    let mut fc = fb;
    let mut d = 0.0_f64;
    let mut e = 0.0_f64;
    for _ in 0..ITMAX {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 1e-300;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Err(Error::InvalidInput(
        "root refinement exceeded its iteration budget".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, nu: f64, p: f64) -> Params {
        Params::new(n, nu, p).unwrap()
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            Params::new(2, 1.0, 2.0),
            Err(Error::DimensionTooSmall(2))
        ));
        assert!(matches!(Params::new(5, 0.0, 2.0), Err(Error::BadNu(_))));
        assert!(matches!(
            Params::new(5, 1.0, 1.0),
            Err(Error::BadExponent(_))
        ));
        assert!(matches!(
            Params::new(5, f64::NAN, 2.0),
            Err(Error::BadNu(_))
        ));
    }

    #[test]
    fn derived_constants_satisfy_their_identities() {
        let pr = params(5, 1.5, 5.0);
        assert_eq!(pr.nu_star, 1.5);
        assert_eq!(pr.beta, 1.0);
        assert!((pr.gamma - 1.25).abs() < 1e-15);
        assert!((pr.mu - 0.0).abs() < 1e-15);
        let c = singular_coefficient(&pr).unwrap();
        assert!((c.powi(4) - pr.gamma).abs() < 1e-14);
    }

    #[test]
    fn singular_coefficient_requires_positive_gamma() {
        let pr = params(5, 0.2, 30.0);
        assert!(pr.gamma < 0.0);
        assert!(matches!(
            singular_coefficient(&pr),
            Err(Error::NonPositiveGamma(_))
        ));
    }

    #[test]
    fn brent_finds_a_cubic_root() {
        let root = brent_root(|x| x * x * x - 2.0, 1.0, 2.0).unwrap();
        assert!((root - 2.0_f64.powf(1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn brent_rejects_a_bad_bracket() {
        assert!(brent_root(|x| x * x + 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn theta_case_assignment_matches_the_partition() {
        assert_eq!(theta_roots(5, 1.5).unwrap().case, ThetaCase::LowI);
        assert_eq!(theta_roots(3, 0.25).unwrap().case, ThetaCase::LowII);
        assert_eq!(theta_roots(13, 5.9).unwrap().case, ThetaCase::HighI);
        assert_eq!(theta_roots(12, 5.02).unwrap().case, ThetaCase::HighII);
        assert_eq!(theta_roots(12, 5.0).unwrap().case, ThetaCase::HighIII);
        assert_eq!(theta_roots(11, 4.5).unwrap().case, ThetaCase::HighIII);
    }

    #[test]
    fn coincident_pair_detected_at_nu_bar() {
        let bar = nu_bar(13).unwrap();
        let roots = theta_roots(13, bar).unwrap();
        assert_eq!(roots.case, ThetaCase::HighII);
        assert!(roots.coincident);
        let s_min = -(5.5 - 4.0) / 3.0;
        assert!((roots.sigma_minus.unwrap() - s_min).abs() < 1e-12);
        assert_eq!(roots.sigma_minus, roots.sigma_plus);
    }

    #[test]
    fn interval_membership_honours_endpoints() {
        let iv = PInterval {
            lo: 1.0,
            lo_closed: false,
            hi: 2.0,
            hi_closed: true,
        };
        assert!(!iv.contains(1.0));
        assert!(iv.contains(2.0));
        assert!(iv.contains(1.5));
        assert!(!iv.contains(2.0 + 1e-12));
        let unbounded = PInterval {
            lo: 3.0,
            lo_closed: true,
            hi: f64::INFINITY,
            hi_closed: false,
        };
        assert!(unbounded.contains(1e308));
        assert!(!unbounded.contains(f64::INFINITY));
    }

    #[test]
    fn stability_boundaries_are_stable() {
        let report = exponent_report(12, 5.02).unwrap();
        let p_minus = report.p_minus.unwrap();
        let p_plus = report.p_plus.unwrap();
        for p in [report.p_sharp, p_minus, p_plus] {
            let verdict = classify_singular_stability(&params(12, 5.02, p))
                .unwrap()
                .verdict;
            assert_eq!(verdict, RegimeVerdict::Stable, "boundary p = {p}");
        }
    }

    #[test]
    fn outside_range_reported_above_p_upper() {
        let report = classify_singular_stability(&params(3, 0.25, 9.5)).unwrap();
        assert_eq!(report.verdict, RegimeVerdict::OutsideRange);
        assert!(!report.in_stable_interval);
    }

    #[test]
    fn report_serializes_infinite_upper_bound_as_string() {
        let report = exponent_report(5, 1.5).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"p_upper\":\"inf\""));
        let back: ExponentReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
