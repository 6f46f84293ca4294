//! Convergence-study driver: sweeps coarse mesh levels, solves the
//! transport benchmark and writes error tables and solution fields.

mod config;
mod error;
mod export;
mod study;

pub use config::{parse_levels, Levels, RunConfig, MAX_DEGREE, MAX_ENRICH, MAX_TEST_REFINE};
pub use error::CliError;
pub use export::{csv_string, export_csv, export_vtk, vtk_string, CSV_HEADER};
pub use study::{
    exact_solution, run_convergence_study, solve_level, ErrorReport, LevelSolution, ReportRow,
    Study,
};

/// Runs the study described by `config` and writes the requested files.
pub fn run(config: &RunConfig) -> Result<ErrorReport, CliError> {
    let study = run_convergence_study(config)?;
    if let Some(path) = &config.csv {
        export_csv(&study.report, path)?;
    }
    if let (Some(path), Some(sol)) = (&config.vtk, &study.finest) {
        export_vtk(sol.phi(), sol.theta(), &sol.pair, &sol.layout, path)?;
    }
    Ok(study.report)
}
