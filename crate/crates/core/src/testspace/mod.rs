//! Near-optimal test functions from cell-local Gram solves.
//!
//! On each coarse cell the coefficients `C_K` of the near-optimal test
//! functions in the test-search basis solve `B_K C_K = G_K`, where `B_K` is
//! the Gram matrix of the test inner product and `G_K` the bilinear form
//! tested against the test-search basis. The resulting local stiffness is
//! `A_K = G_K^T C_K`.

mod cache;

pub use cache::{cache_registry, CacheStats, CoefficientCache, KeyedCache, LastCellCache, NoCache};

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::error::Result;
use crate::forms::{local_saddle_blocks, BilinearForm, InnerProduct, LocalCell};
use crate::solve::cholesky_factor;

/// Columns are the coefficient vectors of the near-optimal test functions,
/// one per local trial function.
#[derive(Clone, Debug, PartialEq)]
pub struct TestCoefficients {
    pub matrix: DMatrix<f64>,
}

/// Reference Jacobian of a cell rounded to 12 decimals. Translation is
/// discarded, so equal keys mean congruent-by-translation cells with the
/// same vertex ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeometryKey([i64; 4]);

impl GeometryKey {
    pub fn from_jacobian(j: &Matrix2<f64>) -> Self {
        let r = |v: f64| (v * 1e12).round() as i64;
        Self([r(j[(0, 0)]), r(j[(0, 1)]), r(j[(1, 0)]), r(j[(1, 1)])])
    }

    pub fn of(cell: &LocalCell) -> Self {
        Self::from_jacobian(&cell.coarse.jacobian)
    }
}

/// Solves `B C = G` column by column with one Cholesky factorization.
/// `cell` is only used to label a failure.
pub fn compute_coefficients(
    b: &DMatrix<f64>,
    g: &DMatrix<f64>,
    cell: usize,
) -> Result<TestCoefficients> {
    let factor = cholesky_factor(b).map_err(|e| e.on_cell(cell))?;
    Ok(TestCoefficients {
        matrix: factor.solve(g),
    })
}

/// `A_K = G_K^T C_K`, symmetrized to remove roundoff asymmetry.
pub fn near_optimal_local_matrix(g: &DMatrix<f64>, c: &TestCoefficients) -> DMatrix<f64> {
    let a = g.transpose() * &c.matrix;
    (&a + a.transpose()) * 0.5
}

/// `C_K^T l_K`: the load tested against each near-optimal test function.
pub fn near_optimal_load(c: &TestCoefficients, load: &DVector<f64>) -> DVector<f64> {
    c.matrix.tr_mul(load)
}

/// Everything the assembler needs from one coarse cell, apart from the load.
#[derive(Clone, Debug)]
pub struct LocalSolve {
    pub gram: DMatrix<f64>,
    pub form: DMatrix<f64>,
    pub coefficients: TestCoefficients,
    pub stiffness: DMatrix<f64>,
}

impl LocalSolve {
    pub fn compute(
        form: &BilinearForm,
        inner: &InnerProduct,
        cell: &LocalCell,
        id: usize,
    ) -> Result<Self> {
        let (gram, g) = local_saddle_blocks(form, inner, cell)?;
        let coefficients = compute_coefficients(&gram, &g, id)?;
        let stiffness = near_optimal_local_matrix(&g, &coefficients);
        Ok(Self {
            gram,
            form: g,
            coefficients,
            stiffness,
        })
    }
}

/// Near-optimal test space of a bilinear form and inner product, with
/// coefficient reuse through a [`CoefficientCache`].
///
/// Cached entries are keyed by geometry only, so one cache must not be
/// shared between different forms or refinement levels.
pub struct NearOptimalTestSpace<'a> {
    pub form: &'a BilinearForm,
    pub inner: &'a InnerProduct,
    cache: &'a dyn CoefficientCache,
}

impl<'a> NearOptimalTestSpace<'a> {
    pub fn new(
        form: &'a BilinearForm,
        inner: &'a InnerProduct,
        cache: &'a dyn CoefficientCache,
    ) -> Self {
        Self { form, inner, cache }
    }

    pub fn local_solve(&self, cell: &LocalCell, id: usize) -> Result<Arc<LocalSolve>> {
        let key = GeometryKey::of(cell);
        self.cache.get_or_compute(key, &mut || {
            LocalSolve::compute(self.form, self.inner, cell, id)
        })
    }

    pub fn coefficients_for_cell(&self, cell: &LocalCell, id: usize) -> Result<TestCoefficients> {
        Ok(self.local_solve(cell, id)?.coefficients.clone())
    }

    pub fn cache(&self) -> &dyn CoefficientCache {
        self.cache
    }
}

#[cfg(test)]
mod tests;
