use std::time::Instant;

use dpg_core::assembly::{
    apply_dirichlet, assemble, inflow_mask, pin_characteristic_dofs, SolutionLayout,
};
use dpg_core::estimator::{
    l2_error, ramp_solution, transport_estimator_forms, EnrichedSpace, Estimator,
};
use dpg_core::fem::SpaceKind;
use dpg_core::forms::{graph_inner_product, transport_bilinear_form, Space};
use dpg_core::geometry::Point;
use dpg_core::mesh::MeshPair;
use dpg_core::solve::{solver_registry, SolveOptions};
use dpg_core::testspace::cache_registry;

use crate::{CliError, RunConfig};

/// One level of the sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub level: u32,
    pub h: f64,
    pub ndof: usize,
    pub l2_error: f64,
    pub eta: f64,
    pub efficiency: f64,
    pub iterations: usize,
    pub seconds: f64,
    pub converged: bool,
    pub cache_hit_rate: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErrorReport {
    pub rows: Vec<ReportRow>,
}

impl ErrorReport {
    pub fn failed_levels(&self) -> Vec<u32> {
        self.rows
            .iter()
            .filter(|r| !r.converged)
            .map(|r| r.level)
            .collect()
    }

    pub fn l2_errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.l2_error).collect()
    }
}

/// Discrete solution of one level.
#[derive(Clone, Debug)]
pub struct LevelSolution {
    pub pair: MeshPair,
    pub layout: SolutionLayout,
    pub solution: Vec<f64>,
}

impl LevelSolution {
    pub fn phi(&self) -> &[f64] {
        self.layout.block(&self.solution, 0)
    }

    pub fn theta(&self) -> &[f64] {
        self.layout.block(&self.solution, 1)
    }
}

pub struct Study {
    pub report: ErrorReport,
    /// Solution of the last (finest) level.
    pub finest: Option<LevelSolution>,
}

/// Solves one level: assemble, zero inflow, pin characteristic traces,
/// solve. Returns the solution with the solver report and cache hit rate.
pub fn solve_level(
    config: &RunConfig,
    level: u32,
) -> Result<(LevelSolution, dpg_core::solve::CgReport, f64), CliError> {
    let beta = config.beta();
    let m = config.degree;
    let pair = MeshPair::uniform(level, config.test_refine);
    let test = Space::new(SpaceKind::BrokenFine, m + 1);
    let form = transport_bilinear_form(test.clone(), beta, config.reaction, m)?;
    let inner = graph_inner_product(test, beta)?;
    let layout = SolutionLayout::transport(&pair, m)?;
    let cache = cache_registry().create(&config.cache)?;
    let f = config.rhs_const;
    let mut system = assemble(&form, &inner, &pair, &layout, &|_| f, cache.as_ref())?;
    let mask = inflow_mask(layout.map(1), &pair.coarse, beta)?;
    apply_dirichlet(&mut system, &mask, 1, 0.0)?;
    pin_characteristic_dofs(&mut system, layout.map(1), 1, &pair, beta)?;
    let solver = solver_registry().create(&config.solver)?;
    let opts = SolveOptions {
        tol: config.tol,
        max_iter: config.max_iter,
    };
    let (solution, report) = solver.solve(&system.matrix, &system.rhs, &opts)?;
    let hit_rate = cache.stats().hit_rate();
    Ok((
        LevelSolution {
            pair,
            layout,
            solution,
        },
        report,
        hit_rate,
    ))
}

/// Closed-form solution for the configured constant data.
pub fn exact_solution(config: &RunConfig) -> impl Fn(Point) -> f64 {
    let (beta, c, f) = (config.beta(), config.reaction, config.rhs_const);
    move |x| ramp_solution(x, beta, c, f)
}

/// Runs every configured level in order. A level whose solve fails or does
/// not converge is reported with `converged = false` and the sweep goes on.
pub fn run_convergence_study(config: &RunConfig) -> Result<Study, CliError> {
    config.validate()?;
    let exact = exact_solution(config);
    let (eform, einner) = transport_estimator_forms(
        EnrichedSpace::new(config.enrich),
        config.beta(),
        config.reaction,
        config.degree,
    )?;
    let estimator = Estimator::new(&eform, &einner)?;
    let f = config.rhs_const;
    let mut report = ErrorReport::default();
    let mut finest = None;
    for &level in &config.levels.0 {
        let start = Instant::now();
        let h = 0.5f64.powi(level as i32);
        let (sol, cg, hit_rate) = match solve_level(config, level) {
            Ok(r) => r,
            Err(CliError::Core(e)) if is_solver_failure(&e) => {
                report.rows.push(failed_row(level, h));
                continue;
            }
            Err(e) => return Err(e),
        };
        let l2 = l2_error(sol.layout.map(0), sol.phi(), &exact, &sol.pair.coarse)?;
        let eta = estimator
            .estimate(&sol.pair, &sol.layout, &sol.solution, &|_| f)?
            .eta;
        report.rows.push(ReportRow {
            level,
            h,
            ndof: sol.layout.n_dofs(),
            l2_error: l2,
            eta,
            efficiency: eta / l2,
            iterations: cg.iterations,
            seconds: if config.timing {
                start.elapsed().as_secs_f64()
            } else {
                0.0
            },
            converged: cg.converged,
            cache_hit_rate: hit_rate,
        });
        finest = Some(sol);
    }
    Ok(Study { report, finest })
}

fn is_solver_failure(e: &dpg_core::DpgError) -> bool {
    use dpg_core::DpgError::*;
    matches!(
        e,
        NotPositiveDefinite { .. } | NanEncountered { .. } | LocalGram { .. }
    )
}

fn failed_row(level: u32, h: f64) -> ReportRow {
    ReportRow {
        level,
        h,
        ndof: 0,
        l2_error: f64::NAN,
        eta: f64::NAN,
        efficiency: f64::NAN,
        iterations: 0,
        seconds: 0.0,
        converged: false,
        cache_hit_rate: 0.0,
    }
}
