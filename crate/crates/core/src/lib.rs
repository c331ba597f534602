//! Slow-decay positive radial solutions of the supercritical Hardy equation
//! `-Δu + (nu^2 - nu_star^2) |x|^{-2} u = u^p` on punctured or exterior
//! domains.
//!
//! The crate computes the critical-exponent atlas that organises the problem
//! (Serrin, Sobolev, Joseph-Lundgren-type, and slow-decay thresholds),
//! classifies the stability of the explicit singular solution, constructs
//! the one-parameter family of regular slow-decay profiles as heteroclinic
//! orbits of the Fowler phase plane, and solves exterior boundary-value
//! problems between ordered comparison pairs.
//!
//! ```
//! use slowdecay::atlas::{self, Params};
//!
//! let params = Params::new(15, 6.5, 3.0).unwrap();
//! let report = atlas::exponent_report(params.n, params.nu).unwrap();
//! assert!(report.p_lower < report.p_sharp);
//! assert!(report.p_sharp < report.p_sobolev);
//!
//! let stability = atlas::classify_singular_stability(&params).unwrap();
//! assert_eq!(stability.verdict, atlas::RegimeVerdict::Stable);
//! ```

#![warn(missing_docs)]

pub mod analysis;
pub mod atlas;
pub mod error;
pub mod exterior;
pub mod extreal;
pub mod fowler;
pub mod heteroclinic;
pub mod ode;
pub mod profile;
pub mod rk4;

pub use atlas::Params;
pub use error::{Error, Result};
pub use profile::RadialProfile;
