//! The `sweep` subcommand: evaluate a parameter grid into one CSV atlas.
//!
//! Rows are computed in parallel (honoring `RAYON_NUM_THREADS`) but written
//! in lexicographic (n, nu, p) order, so repeated runs with the same inputs
//! produce byte-identical files.  A failing task leaves its columns empty
//! and notes the reason in the trailing `error` column; the run continues.

use std::path::PathBuf;

use clap::{Args as ClapArgs, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use slowdecay::atlas;
use slowdecay::exterior::{
    build_subsolution, build_supersolution, exterior_grid, monotone_iterate, ExteriorOptions,
    ExteriorProblem,
};
use slowdecay::heteroclinic::{
    attractor_rate, detect_approach, shoot_heteroclinic, ApproachKind, SolverOptions,
};
use slowdecay::{Params, RadialProfile};

use crate::config::Config;
use crate::{emit, exponents, Failure};

/// Per-row work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// Critical-exponent atlas columns
    Exponents,
    /// Stability verdict of the singular solution
    Certify,
    /// Shooting approach and fitted contraction rate
    Shoot,
    /// Monotone iteration on the exterior domain (R_K = 1, psi = 0)
    Exterior,
}

/// A `{min, max, count}` grid; `count = 1` takes `min` alone.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Exponent grid: explicit, or `"auto"` for interior points of the
/// slow-decay window `(p_sobolev, min(p_upper, p_sobolev + 10))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PGrid {
    Auto(String),
    Explicit(GridSpec),
}

/// Everything one sweep needs; also the schema of `--spec` files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub n_list: Vec<u32>,
    pub nu_grid: GridSpec,
    pub p_grid: PGrid,
    /// Points per auto p-grid; ignored for an explicit grid.
    #[serde(default = "default_p_count")]
    pub p_count: usize,
    pub tasks: Vec<Task>,
}

fn default_p_count() -> usize {
    9
}

impl SweepSpec {
    fn validate(&self) -> Result<(), Failure> {
        if self.n_list.is_empty() {
            return Err(Failure::invalid("n_list must not be empty"));
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 3) {
            return Err(Failure::invalid(format!("dimension {n} is below 3")));
        }
        validate_grid("nu", &self.nu_grid)?;
        if !(self.nu_grid.min > 0.0) {
            return Err(Failure::invalid("nu grid must be positive"));
        }
        match &self.p_grid {
            PGrid::Auto(tag) if tag == "auto" => {
                if self.p_count == 0 {
                    return Err(Failure::invalid("p_count must be at least 1"));
                }
            }
            PGrid::Auto(tag) => {
                return Err(Failure::invalid(format!(
                    "p_grid must be \"auto\" or {{min, max, count}}, got \"{tag}\""
                )));
            }
            PGrid::Explicit(g) => {
                validate_grid("p", g)?;
                if !(g.min > 1.0) {
                    return Err(Failure::invalid("p grid must stay above 1"));
                }
            }
        }
        Ok(())
    }
}

fn validate_grid(name: &str, g: &GridSpec) -> Result<(), Failure> {
    if g.count == 0 {
        return Err(Failure::invalid(format!("{name} grid count must be >= 1")));
    }
    if !g.min.is_finite() || !g.max.is_finite() || g.max < g.min {
        return Err(Failure::invalid(format!(
            "{name} grid needs finite min <= max"
        )));
    }
    if g.count > 1 && g.max == g.min {
        return Err(Failure::invalid(format!(
            "{name} grid with count > 1 needs max > min"
        )));
    }
    Ok(())
}

/// Evenly spaced samples of a grid spec.
fn grid_points(g: &GridSpec) -> Vec<f64> {
    if g.count == 1 {
        vec![g.min]
    } else {
        (0..g.count)
            .map(|i| g.min + (g.max - g.min) * i as f64 / (g.count - 1) as f64)
            .collect()
    }
}

/// Interior points of the slow-decay exponent window at one (n, nu).
fn auto_p_grid(n: u32, nu: f64, count: usize) -> slowdecay::Result<Vec<f64>> {
    let bounds = atlas::exponent_bounds(n, nu)?;
    let lo = bounds.p_sobolev;
    let hi = bounds.p_upper.min(lo + 10.0);
    Ok((0..count)
        .map(|i| lo + (hi - lo) * (i + 1) as f64 / (count + 1) as f64)
        .collect())
}

#[derive(Debug, Clone, Copy)]
struct TaskSet {
    exponents: bool,
    certify: bool,
    shoot: bool,
    exterior: bool,
}

impl TaskSet {
    fn from_list(tasks: &[Task]) -> TaskSet {
        TaskSet {
            exponents: tasks.contains(&Task::Exponents),
            certify: tasks.contains(&Task::Certify),
            shoot: tasks.contains(&Task::Shoot),
            exterior: tasks.contains(&Task::Exterior),
        }
    }

    fn is_empty(&self) -> bool {
        !(self.exponents || self.certify || self.shoot || self.exterior)
    }
}

/// Header cells for a task set, in fixed column order.
fn header_cells(tasks: &TaskSet) -> Vec<String> {
    let mut h: Vec<String> = ["n", "nu", "p"].iter().map(|c| c.to_string()).collect();
    if tasks.exponents {
        h.extend(exponents::EXPONENT_COLUMNS.iter().map(|c| c.to_string()));
    }
    if tasks.certify {
        h.extend(["verdict", "margin", "dual_agrees"].map(String::from));
    }
    if tasks.shoot {
        h.extend(["approach", "attractor_rate"].map(String::from));
    }
    if tasks.exterior {
        h.extend(["iterations", "residual_sup"].map(String::from));
    }
    h.push("error".to_string());
    h
}

#[derive(Debug, Clone, Copy)]
struct Job {
    n: u32,
    nu: f64,
    p: f64,
}

fn blank(cells: &mut Vec<String>, count: usize) {
    cells.extend(std::iter::repeat(String::new()).take(count));
}

fn compute_row(
    job: Job,
    tasks: &TaskSet,
    sopts: &SolverOptions,
    eopts: &ExteriorOptions,
) -> Vec<String> {
    let mut cells = vec![
        job.n.to_string(),
        emit::float(job.nu),
        emit::float(job.p),
    ];
    let mut errors: Vec<String> = Vec::new();

    if tasks.exponents {
        match atlas::exponent_report(job.n, job.nu) {
            Ok(report) => cells.extend(exponents::exponent_cells(&report)),
            Err(err) => {
                blank(&mut cells, exponents::EXPONENT_COLUMNS.len());
                errors.push(format!("exponents: {err}"));
            }
        }
    }
    if tasks.certify {
        let verdict = Params::new(job.n, job.nu, job.p)
            .and_then(|params| atlas::classify_singular_stability(&params));
        match verdict {
            Ok(r) => cells.extend([
                r.verdict.to_string(),
                emit::float(r.margin),
                r.dual_agrees.to_string(),
            ]),
            Err(err) => {
                blank(&mut cells, 3);
                errors.push(format!("certify: {err}"));
            }
        }
    }
    if tasks.shoot {
        let shot = Params::new(job.n, job.nu, job.p).and_then(|params| {
            let traj = shoot_heteroclinic(&params, sopts)?;
            let approach = detect_approach(&traj, &params)?;
            Ok((params, traj, approach))
        });
        match shot {
            Ok((params, traj, approach)) => {
                let kind = match approach.kind {
                    ApproachKind::Monotone => "monotone",
                    ApproachKind::Spiral => "spiral",
                };
                cells.push(kind.to_string());
                let rate_cell = match approach.kind {
                    ApproachKind::Monotone => match attractor_rate(&traj, &params) {
                        Ok(est) => emit::float(est.rate),
                        Err(err) => {
                            errors.push(format!("shoot: {err}"));
                            String::new()
                        }
                    },
                    ApproachKind::Spiral => String::new(),
                };
                cells.push(rate_cell);
            }
            Err(err) => {
                blank(&mut cells, 2);
                errors.push(format!("shoot: {err}"));
            }
        }
    }
    if tasks.exterior {
        match exterior_row(job, eopts) {
            Ok((iterations, residual_sup)) => {
                cells.push(iterations.to_string());
                cells.push(emit::float(residual_sup));
            }
            Err(err) => {
                blank(&mut cells, 2);
                errors.push(format!("exterior: {err}"));
            }
        }
    }

    cells.push(errors.join("; "));
    cells
}

/// Monotone iteration above the singular base at R_K = 1, psi = 0.
fn exterior_row(job: Job, opts: &ExteriorOptions) -> slowdecay::Result<(usize, f64)> {
    let params = Params::new(job.n, job.nu, job.p)?;
    let grid = exterior_grid(1.0, opts)?;
    let base = RadialProfile::singular(&params, grid)?;
    let problem = ExteriorProblem::new(params, 1.0, 0.0, base)?;
    let sub = build_subsolution(&problem, opts)?;
    let sup = build_supersolution(&problem, opts)?;
    let report = monotone_iterate(&sub, &sup, &problem, opts)?;
    Ok((report.iterations, report.residual_sup))
}

#[derive(ClapArgs)]
pub struct Args {
    /// JSON sweep specification file (alternative to the grid flags)
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Comma-separated spatial dimensions
    #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
    n_list: Vec<u32>,
    /// Smallest Hardy index
    #[arg(long, conflicts_with = "spec")]
    nu_min: Option<f64>,
    /// Largest Hardy index (defaults to --nu-min)
    #[arg(long, conflicts_with = "spec")]
    nu_max: Option<f64>,
    /// Number of nu samples
    #[arg(long, default_value_t = 1, conflicts_with = "spec")]
    nu_count: usize,
    /// Smallest exponent
    #[arg(long, conflicts_with_all = ["spec", "p_auto"])]
    p_min: Option<f64>,
    /// Largest exponent (defaults to --p-min)
    #[arg(long, conflicts_with_all = ["spec", "p_auto"])]
    p_max: Option<f64>,
    /// Number of p samples (default 9, or 1 when only --p-min is given)
    #[arg(long, conflicts_with = "spec")]
    p_count: Option<usize>,
    /// Sample the slow-decay window (p_sobolev, min(p_upper, p_sobolev + 10))
    #[arg(long, conflicts_with = "spec")]
    p_auto: bool,
    /// Comma-separated tasks: exponents, certify, shoot, exterior
    #[arg(long, value_delimiter = ',', conflicts_with = "spec")]
    tasks: Vec<Task>,
    /// Output directory for atlas.csv
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// JSON file overriding solver and exterior options
    #[arg(long)]
    config: Option<PathBuf>,
}

fn spec_from_args(args: &Args) -> Result<SweepSpec, Failure> {
    if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path)?;
        return serde_json::from_str(&text)
            .map_err(|e| Failure::invalid(format!("spec {}: {e}", path.display())));
    }
    if args.n_list.is_empty() {
        return Err(Failure::invalid("either --spec or --n-list is required"));
    }
    let nu_min = args
        .nu_min
        .ok_or_else(|| Failure::invalid("--nu-min is required without --spec"))?;
    let nu_grid = GridSpec {
        min: nu_min,
        max: args.nu_max.unwrap_or(nu_min),
        count: args.nu_count,
    };
    let p_grid = if args.p_auto {
        PGrid::Auto("auto".to_string())
    } else {
        let p_min = args
            .p_min
            .ok_or_else(|| Failure::invalid("one of --p-min or --p-auto is required"))?;
        let fallback = if args.p_max.is_some() { 9 } else { 1 };
        PGrid::Explicit(GridSpec {
            min: p_min,
            max: args.p_max.unwrap_or(p_min),
            count: args.p_count.unwrap_or(fallback),
        })
    };
    Ok(SweepSpec {
        n_list: args.n_list.clone(),
        nu_grid,
        p_grid,
        p_count: args.p_count.unwrap_or(9),
        tasks: args.tasks.clone(),
    })
}

pub fn run(args: &Args) -> Result<i32, Failure> {
    let spec = spec_from_args(args)?;
    spec.validate()?;
    let cfg = Config::load(args.config.as_deref())?;
    let sopts = cfg.solver_options();
    let eopts = cfg.exterior_options();
    let tasks = TaskSet::from_list(&spec.tasks);

    std::fs::create_dir_all(&args.out)?;
    let path = args.out.join("atlas.csv");
    let mut lines = vec![emit::line(&header_cells(&tasks))];

    if tasks.is_empty() {
        std::fs::write(&path, lines.join("\n") + "\n")?;
        eprintln!("wrote 0 rows to {}", path.display());
        return Ok(0);
    }

    let mut n_list = spec.n_list.clone();
    n_list.sort_unstable();
    n_list.dedup();

    let mut jobs: Vec<Job> = Vec::new();
    for &n in &n_list {
        for nu in grid_points(&spec.nu_grid) {
            let p_points = match &spec.p_grid {
                PGrid::Auto(_) => auto_p_grid(n, nu, spec.p_count).map_err(Failure::from)?,
                PGrid::Explicit(g) => grid_points(g),
            };
            for p in p_points {
                jobs.push(Job { n, nu, p });
            }
        }
    }

    let rows: Vec<Vec<String>> = jobs
        .par_iter()
        .map(|job| compute_row(*job, &tasks, &sopts, &eopts))
        .collect();
    lines.extend(rows.iter().map(|cells| emit::line(cells)));
    std::fs::write(&path, lines.join("\n") + "\n")?;
    eprintln!("wrote {} rows to {}", rows.len(), path.display());
    Ok(0)
}
