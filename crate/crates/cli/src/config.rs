use std::f64::consts::PI;
use std::path::PathBuf;

use clap::Parser;
use dpg_core::solve::solver_registry;
use dpg_core::solve::DEFAULT_TOL;
use dpg_core::testspace::cache_registry;

use crate::CliError;

/// Largest trial parameter; the test-search degree `m + 1` must stay within
/// the quadrature table.
pub const MAX_DEGREE: usize = 4;
pub const MAX_TEST_REFINE: u32 = 3;
pub const MAX_ENRICH: usize = 5;

/// Convergence study for the ultra-weak DPG discretization of
/// `beta . grad phi + c phi = f` on the unit square with zero inflow data.
#[derive(Parser, Clone, Debug, PartialEq)]
#[command(name = "dpg", version)]
pub struct RunConfig {
    /// Coarse mesh levels, as `A:B` (inclusive) or a comma list.
    #[arg(long, default_value = "2:6", value_parser = parse_levels)]
    pub levels: Levels,
    /// Refinement level of the test-search mesh inside each coarse cell.
    #[arg(long = "test-refine", default_value_t = 1)]
    pub test_refine: u32,
    /// Trial parameter m: phi has degree m-1, theta degree m.
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    /// Direction of beta in radians.
    #[arg(long = "beta-angle", default_value_t = PI / 8.0, allow_negative_numbers = true)]
    pub beta_angle: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub reaction: f64,
    #[arg(
        long = "rhs-const",
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    pub rhs_const: f64,
    /// Polynomial degree of the estimator's enriched space.
    #[arg(long, default_value_t = 5)]
    pub enrich: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Solution of the finest level.
    #[arg(long)]
    pub vtk: Option<PathBuf>,
    /// Relative residual tolerance of the iterative solver.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value = "cg")]
    pub solver: String,
    /// Local coefficient cache policy.
    #[arg(long, default_value = "keyed")]
    pub cache: String,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// Record wall time per level (makes the CSV run-dependent).
    #[arg(long)]
    pub timing: bool,
}

/// Sorted, duplicate-free list of coarse levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Levels(pub Vec<u32>);

impl std::fmt::Display for Levels {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = &self.0;
        let contiguous = v.len() > 1 && v.windows(2).all(|w| w[1] == w[0] + 1);
        if contiguous {
            write!(f, "{}:{}", v[0], v[v.len() - 1])
        } else {
            let parts: Vec<String> = v.iter().map(u32::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

pub fn parse_levels(s: &str) -> Result<Levels, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|e| format!("bad level '{t}': {e}"))
    };
    let mut v = if let Some((a, b)) = s.split_once(':') {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty level range {a}:{b}"));
        }
        (a..=b).collect::<Vec<_>>()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    v.sort_unstable();
    v.dedup();
    if v.is_empty() {
        return Err("no levels given".into());
    }
    Ok(Levels(v))
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::parse_from(["dpg"])
    }
}

impl RunConfig {
    pub fn beta(&self) -> [f64; 2] {
        [self.beta_angle.cos(), self.beta_angle.sin()]
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.degree == 0 || self.degree > MAX_DEGREE {
            return bad(format!(
                "--degree must lie in 1..={MAX_DEGREE}, got {}",
                self.degree
            ));
        }
        if self.test_refine > MAX_TEST_REFINE {
            return bad(format!(
                "--test-refine must be at most {MAX_TEST_REFINE}, got {}",
                self.test_refine
            ));
        }
        if self.enrich == 0 || self.enrich > MAX_ENRICH {
            return bad(format!(
                "--enrich must lie in 1..={MAX_ENRICH}, got {}",
                self.enrich
            ));
        }
        for (name, v) in [
            ("--beta-angle", self.beta_angle),
            ("--reaction", self.reaction),
            ("--rhs-const", self.rhs_const),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("--tol must lie in (0, 1), got {}", self.tol));
        }
        if self.levels.0.is_empty() {
            return bad("no levels given".into());
        }
        if let Some(&l) = self.levels.0.iter().find(|&&l| l > 12) {
            return bad(format!("level {l} is beyond the supported range 0..=12"));
        }
        if !solver_registry().contains(&self.solver) {
            let names: Vec<_> = solver_registry().names().collect();
            return bad(format!(
                "unknown solver '{}', available: {}",
                self.solver,
                names.join(", ")
            ));
        }
        if !cache_registry().contains(&self.cache) {
            let names: Vec<_> = cache_registry().names().collect();
            return bad(format!(
                "unknown cache '{}', available: {}",
                self.cache,
                names.join(", ")
            ));
        }
        Ok(())
    }

    /// Canonical flag list; parsing it reproduces `self`.
    pub fn to_args(&self) -> Vec<String> {
        let mut a = vec![
            "--levels".to_string(),
            self.levels.to_string(),
            "--test-refine".into(),
            self.test_refine.to_string(),
            "--degree".into(),
            self.degree.to_string(),
            "--beta-angle".into(),
            self.beta_angle.to_string(),
            "--reaction".into(),
            self.reaction.to_string(),
            "--rhs-const".into(),
            self.rhs_const.to_string(),
            "--enrich".into(),
            self.enrich.to_string(),
            "--tol".into(),
            self.tol.to_string(),
            "--solver".into(),
            self.solver.clone(),
            "--cache".into(),
            self.cache.clone(),
        ];
        if let Some(p) = &self.csv {
            a.extend(["--csv".into(), p.display().to_string()]);
        }
        if let Some(p) = &self.vtk {
            a.extend(["--vtk".into(), p.display().to_string()]);
        }
        if let Some(n) = self.max_iter {
            a.extend(["--max-iter".into(), n.to_string()]);
        }
        if self.timing {
            a.push("--timing".into());
        }
        a
    }
}
