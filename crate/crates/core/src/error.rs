//! Error type shared by every solver stage.

use thiserror::Error;

/// Errors produced by parameter validation, integration, and the exterior
/// comparison machinery.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Spatial dimension below the admissible range.
    #[error("dimension N must be at least 3, got {0}")]
    DimensionTooSmall(u32),
    /// The Hardy index nu must be positive.
    #[error("nu must be positive and finite, got {0}")]
    BadNu(f64),
    /// The nonlinearity exponent must exceed 1.
    #[error("exponent p must be finite and exceed 1, got {0}")]
    BadExponent(f64),
    /// The exponent lies outside the range required by the operation.
    #[error("exponent p = {p} lies outside the required range ({lo}, {hi})")]
    ExponentOutOfRange {
        /// Offending exponent.
        p: f64,
        /// Lower endpoint of the admissible open interval.
        lo: f64,
        /// Upper endpoint of the admissible open interval.
        hi: f64,
    },
    /// gamma = nu^2 - beta^2 must be positive for the singular solution.
    #[error("gamma = {0} is not positive, so no positive singular solution exists")]
    NonPositiveGamma(f64),
    /// A radius or log-radius grid failed validation.
    #[error("grid must be finite, strictly increasing, and hold at least {min} nodes")]
    BadGrid {
        /// Minimum node count required by the caller.
        min: usize,
    },
    /// Profile values failed validation.
    #[error("profile values must be finite and nonnegative (index {index}, value {value})")]
    BadProfileValue {
        /// Index of the offending sample.
        index: usize,
        /// The offending value.
        value: f64,
    },
    /// The two profiles are not sampled on a common grid.
    #[error("profiles are not sampled on a common log-radius grid")]
    GridMismatch,
    /// The shared grid is too short for the requested diagnostic.
    #[error("grid window of length {have} is shorter than the required {need}")]
    InsufficientGrid {
        /// Available window length in log radius.
        have: f64,
        /// Required window length in log radius.
        need: f64,
    },
    /// The trajectory did not reach the attractor in the allotted time.
    #[error("no convergence to the attractor by t = {t_max} (distance {dist:e})")]
    NonConvergence {
        /// Integration horizon that was exhausted.
        t_max: f64,
        /// Final phase-space distance to the attractor.
        dist: f64,
    },
    /// The approach to the attractor matched neither admissible pattern.
    #[error("ambiguous attractor approach: {0}")]
    AmbiguousApproach(String),
    /// Rate estimation is undefined for oscillatory approaches.
    #[error("attractor rate is undefined for a spiral approach")]
    SpiralRate,
    /// The integrator exceeded its step budget.
    #[error("step count exceeded the limit of {0}")]
    StepLimit(usize),
    /// The adaptive integrator drove the step size below resolution.
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    /// The linear exterior operator is not coercive for this potential.
    #[error("noncoercive potential: sup r^2 V = {sup} exceeds nu^2 = {limit}")]
    NonCoercive {
        /// Supremum of the scaled potential over the grid.
        sup: f64,
        /// Coercivity threshold nu^2.
        limit: f64,
    },
    /// Boundary data outside the comparison range.
    #[error("boundary value psi = {psi} must satisfy 0 <= psi < {max}")]
    BadBoundaryData {
        /// Offending boundary value.
        psi: f64,
        /// Strict upper limit for admissible data.
        max: f64,
    },
    /// The requested family parameter sits at or below the threshold.
    #[error("lambda = {lambda} does not exceed the threshold lambda_psi = {lambda_psi}")]
    LambdaBelowThreshold {
        /// Requested parameter.
        lambda: f64,
        /// Threshold computed from the boundary data.
        lambda_psi: f64,
    },
    /// A sub/supersolution inequality failed beyond tolerance.
    #[error("{side} inequality violated at node {index}: residual {residual:e}")]
    InequalityViolated {
        /// Which comparison object failed ("subsolution" or "supersolution").
        side: &'static str,
        /// Grid index of the worst violation.
        index: usize,
        /// Scaled residual at that node.
        residual: f64,
    },
    /// The monotone iteration left its sandwich.
    #[error(
        "monotone iteration left the sub/supersolution sandwich at node {index}: \
         value {value:e} outside [{lo:e}, {hi:e}]"
    )]
    MonotonicityBroken {
        /// Grid index of the violation.
        index: usize,
        /// Iterate value at that node.
        value: f64,
        /// Lower sandwich bound.
        lo: f64,
        /// Upper sandwich bound.
        hi: f64,
    },
    /// The monotone iteration ran out of iterations.
    #[error("monotone iteration did not converge within {0} iterations")]
    MaxIterations(usize),
    /// Catch-all for invalid caller input.
    #[error("{0}")]
    InvalidInput(String),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
