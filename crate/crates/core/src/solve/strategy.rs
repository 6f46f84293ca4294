use nalgebra::{DMatrix, DVector};

use super::{cg_solve, cholesky_factor, CgReport, CsrMatrix, DEFAULT_TOL};
use crate::error::{DpgError, Result};
use crate::registry::Registry;

/// Largest system the dense direct path accepts.
pub const DENSE_LIMIT: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    /// `None` means `10 * n`.
    pub max_iter: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: None,
        }
    }
}

/// A solver for the assembled SPD system.
pub trait GlobalSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(
        &self,
        a: &CsrMatrix,
        rhs: &[f64],
        opts: &SolveOptions,
    ) -> Result<(Vec<f64>, CgReport)>;
}

pub struct JacobiCg;

impl GlobalSolver for JacobiCg {
    fn name(&self) -> &'static str {
        "cg"
    }

    fn solve(
        &self,
        a: &CsrMatrix,
        rhs: &[f64],
        opts: &SolveOptions,
    ) -> Result<(Vec<f64>, CgReport)> {
        let max_iter = opts.max_iter.unwrap_or(10 * a.dim().max(1));
        cg_solve(a, rhs, opts.tol, max_iter)
    }
}

/// Dense Cholesky of the whole system; limited to [`DENSE_LIMIT`] unknowns.
pub struct DenseCholesky;

impl GlobalSolver for DenseCholesky {
    fn name(&self) -> &'static str {
        "dense-cholesky"
    }

    fn solve(
        &self,
        a: &CsrMatrix,
        rhs: &[f64],
        _opts: &SolveOptions,
    ) -> Result<(Vec<f64>, CgReport)> {
        let n = a.dim();
        if n > DENSE_LIMIT {
            return Err(DpgError::InvalidArgument(format!(
                "dense solve limited to {DENSE_LIMIT} unknowns, system has {n}"
            )));
        }
        let dense: DMatrix<f64> = a.to_dense();
        let factor = cholesky_factor(&dense)?;
        let x = factor.solve_vec(&DVector::from_column_slice(rhs));
        let residual = (&dense * &x - DVector::from_column_slice(rhs)).norm();
        Ok((
            x.as_slice().to_vec(),
            CgReport {
                iterations: 1,
                residual_norm: residual,
                converged: true,
            },
        ))
    }
}

/// Registry with `cg` and `dense-cholesky`.
pub fn solver_registry() -> Registry<dyn GlobalSolver> {
    let mut r: Registry<dyn GlobalSolver> = Registry::new("solver");
    r.register("cg", || Box::new(JacobiCg));
    r.register("dense-cholesky", || Box::new(DenseCholesky));
    r
}
