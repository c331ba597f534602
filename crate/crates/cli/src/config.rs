//! Optional JSON overrides for solver and exterior-grid options.
//!
//! The `--config` file holds two optional objects, `solver` and `exterior`;
//! any field left out keeps its library default.  Unknown keys are rejected
//! so typos fail loudly.

use std::path::Path;

use serde::Deserialize;
use slowdecay::exterior::ExteriorOptions;
use slowdecay::heteroclinic::SolverOptions;

use crate::Failure;

/// Partial override set; absent fields keep their defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub solver: SolverOverrides,
    #[serde(default)]
    pub exterior: ExteriorOverrides,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    pub eps_start: Option<f64>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub tol_attr: Option<f64>,
    pub t_max: Option<f64>,
    pub dense_spacing: Option<f64>,
    pub head_span: Option<f64>,
    pub manifold_correction: Option<bool>,
    pub max_steps: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExteriorOverrides {
    pub span: Option<f64>,
    pub spacing: Option<f64>,
    pub iter_tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub coercivity_slack: Option<f64>,
    pub inequality_tol: Option<f64>,
}

impl Config {
    /// Load overrides from a JSON file; `None` gives pure defaults.
    pub fn load(path: Option<&Path>) -> Result<Config, Failure> {
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                serde_json::from_str(&text)
                    .map_err(|e| Failure::invalid(format!("config {}: {e}", p.display())))
            }
        }
    }

    /// Shooting options with the overrides applied.
    pub fn solver_options(&self) -> SolverOptions {
        let mut o = SolverOptions::default();
        let s = &self.solver;
        if let Some(v) = s.eps_start {
            o.eps_start = v;
        }
        if let Some(v) = s.rtol {
            o.rtol = v;
        }
        if let Some(v) = s.atol {
            o.atol = v;
        }
        if let Some(v) = s.tol_attr {
            o.tol_attr = v;
        }
        if let Some(v) = s.t_max {
            o.t_max = Some(v);
        }
        if let Some(v) = s.dense_spacing {
            o.dense_spacing = v;
        }
        if let Some(v) = s.head_span {
            o.head_span = v;
        }
        if let Some(v) = s.manifold_correction {
            o.manifold_correction = v;
        }
        if let Some(v) = s.max_steps {
            o.max_steps = v;
        }
        o
    }

    /// Exterior-grid options with the overrides applied.
    pub fn exterior_options(&self) -> ExteriorOptions {
        let mut o = ExteriorOptions::default();
        let e = &self.exterior;
        if let Some(v) = e.span {
            o.span = v;
        }
        if let Some(v) = e.spacing {
            o.spacing = v;
        }
        if let Some(v) = e.iter_tol {
            o.iter_tol = v;
        }
        if let Some(v) = e.max_iters {
            o.max_iters = v;
        }
        if let Some(v) = e.coercivity_slack {
            o.coercivity_slack = v;
        }
        if let Some(v) = e.inequality_tol {
            o.inequality_tol = v;
        }
        o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_keeps_the_defaults() {
        let cfg: Config = serde_json::from_str("{}").unwrap();
        let d = SolverOptions::default();
        let o = cfg.solver_options();
        assert_eq!(o.eps_start, d.eps_start);
        assert_eq!(o.max_steps, d.max_steps);
        assert_eq!(cfg.exterior_options().span, ExteriorOptions::default().span);
    }

    #[test]
    fn partial_overrides_apply_only_where_given() {
        let cfg: Config = serde_json::from_str(
            r#"{"solver": {"eps_start": 1e-7}, "exterior": {"spacing": 0.001}}"#,
        )
        .unwrap();
        let s = cfg.solver_options();
        assert_eq!(s.eps_start, 1e-7);
        assert_eq!(s.rtol, SolverOptions::default().rtol);
        let e = cfg.exterior_options();
        assert_eq!(e.spacing, 0.001);
        assert_eq!(e.span, ExteriorOptions::default().span);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<Config>(r#"{"solver": {"epsstart": 1e-7}}"#).is_err());
        assert!(serde_json::from_str::<Config>(r#"{"solvers": {}}"#).is_err());
    }
}
