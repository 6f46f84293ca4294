//! Residual-based a posteriori estimator and exact-error tools.
//!
//! The residual of the discrete solution is lifted into a broken polynomial
//! space of higher degree on each coarse cell; the indicator is the norm of
//! that lift in the test inner product.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use parking_lot::Mutex;

use crate::assembly::SolutionLayout;
use crate::error::{DpgError, Result};
use crate::fem::{make_quadrature, DofMap, LocalBasis, SpaceKind};
use crate::forms::{
    graph_inner_product, local_load, transport_bilinear_form, BilinearForm, InnerProduct,
    LocalCell, Space,
};
use crate::geometry::{AffineMap, Point};
use crate::mesh::{check_unit, refine_cell, MeshPair, TriMesh};
use crate::solve::{cholesky_factor, CholeskyFactor};
use crate::testspace::GeometryKey;

pub const DEFAULT_ENRICHMENT: usize = 5;

/// Quadrature exactness used by [`l2_error`].
pub const L2_QUADRATURE: usize = 10;

/// Red-refinement levels of the composite rule in [`l2_error`]. The exact
/// solution has a kink across some cells, where a single Gauss rule loses
/// about a percent of accuracy on coarse meshes.
pub const L2_SUBDIVISION: u32 = 2;

/// Broken polynomials of one degree on the coarse cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnrichedSpace {
    degree: usize,
}

impl EnrichedSpace {
    pub fn new(degree: usize) -> Self {
        Self { degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space(&self) -> Space {
        Space::new(SpaceKind::BrokenCoarse, self.degree)
    }
}

impl Default for EnrichedSpace {
    fn default() -> Self {
        Self::new(DEFAULT_ENRICHMENT)
    }
}

/// Transport form and graph inner product tested with `enriched`.
pub fn transport_estimator_forms(
    enriched: EnrichedSpace,
    beta: Point,
    reaction: f64,
    m: usize,
) -> Result<(BilinearForm, InnerProduct)> {
    let form = transport_bilinear_form(enriched.space(), beta, reaction, m)?;
    let inner = graph_inner_product(enriched.space(), beta)?;
    Ok((form, inner))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorBreakdown {
    /// Squared indicator of each coarse cell.
    pub per_cell: Vec<f64>,
    pub eta: f64,
    pub l2_error: Option<f64>,
}

/// Square root of the sum of the squared indicators.
pub fn total_estimate(per_cell: &[f64]) -> f64 {
    per_cell.iter().sum::<f64>().max(0.0).sqrt()
}

struct CellData {
    gram: CholeskyFactor,
    form: DMatrix<f64>,
}

/// Per-cell residual lifts, reusing the Gram factor and form block of
/// cells that coincide up to translation.
pub struct Estimator<'a> {
    form: &'a BilinearForm,
    inner: &'a InnerProduct,
    cache: Mutex<HashMap<GeometryKey, Arc<CellData>>>,
}

impl<'a> Estimator<'a> {
    pub fn new(form: &'a BilinearForm, inner: &'a InnerProduct) -> Result<Self> {
        match form.test_spaces() {
            [s] if s.kind() == SpaceKind::BrokenCoarse && inner.spaces() == form.test_spaces() => {}
            _ => {
                return Err(DpgError::InvalidArgument(
                    "estimator needs one broken coarse test space shared with the inner product"
                        .into(),
                ))
            }
        }
        Ok(Self {
            form,
            inner,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn data(&self, cell: &LocalCell, k: usize) -> Result<Arc<CellData>> {
        let key = GeometryKey::of(cell);
        if let Some(d) = self.cache.lock().get(&key) {
            return Ok(d.clone());
        }
        let gram = cholesky_factor(&self.inner.local_matrix(cell)).map_err(|e| e.on_cell(k))?;
        let data = Arc::new(CellData {
            gram,
            form: self.form.local_matrix(cell),
        });
        self.cache.lock().entry(key).or_insert_with(|| data.clone());
        Ok(data)
    }

    /// Residual vector `rho_j = b_K(u_H, w_j) - int_K f w_j` on cell `k`.
    pub fn residual(
        &self,
        pair: &MeshPair,
        layout: &SolutionLayout,
        solution: &[f64],
        rhs: &dyn Fn(Point) -> f64,
        k: usize,
    ) -> Result<DVector<f64>> {
        Ok(self.lift(pair, layout, solution, rhs, k)?.0)
    }

    /// Squared indicator `rho^T B^{-1} rho` of cell `k`.
    pub fn indicator(
        &self,
        pair: &MeshPair,
        layout: &SolutionLayout,
        solution: &[f64],
        rhs: &dyn Fn(Point) -> f64,
        k: usize,
    ) -> Result<f64> {
        let (rho, data) = self.lift(pair, layout, solution, rhs, k)?;
        Ok(rho.dot(&data.gram.solve_vec(&rho)))
    }

    fn lift(
        &self,
        pair: &MeshPair,
        layout: &SolutionLayout,
        solution: &[f64],
        rhs: &dyn Fn(Point) -> f64,
        k: usize,
    ) -> Result<(DVector<f64>, Arc<CellData>)> {
        // Enriched functions are single polynomials on the coarse cell, so
        // the jumps on interior fine edges cancel and level 0 suffices.
        let cell = LocalCell::new(pair.coarse.cell_vertices(k), 0)?;
        let data = self.data(&cell, k)?;
        let local = DVector::from_vec(layout.cell_dofs(k).iter().map(|&i| solution[i]).collect());
        let rho = &data.form * local - local_load(rhs, &cell, &self.form.test_spaces()[0]);
        Ok((rho, data))
    }

    pub fn estimate(
        &self,
        pair: &MeshPair,
        layout: &SolutionLayout,
        solution: &[f64],
        rhs: &dyn Fn(Point) -> f64,
    ) -> Result<ErrorBreakdown> {
        if solution.len() != layout.n_dofs() {
            return Err(DpgError::DimensionMismatch {
                expected: layout.n_dofs(),
                got: solution.len(),
            });
        }
        let per_cell = (0..pair.coarse.num_cells())
            .map(|k| self.indicator(pair, layout, solution, rhs, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(ErrorBreakdown {
            eta: total_estimate(&per_cell),
            per_cell,
            l2_error: None,
        })
    }
}

/// Indicators and total estimate of `solution` for the form and inner
/// product tested with the enriched space.
pub fn a_posteriori_error(
    form: &BilinearForm,
    inner: &InnerProduct,
    pair: &MeshPair,
    layout: &SolutionLayout,
    solution: &[f64],
    rhs: &dyn Fn(Point) -> f64,
) -> Result<ErrorBreakdown> {
    Estimator::new(form, inner)?.estimate(pair, layout, solution, rhs)
}

/// `min(x / beta_1, y / beta_2)`, the transport solution for `c = 0`, `f = 1`
/// and zero inflow when both components of `beta` are positive.
pub fn exact_transport_solution(point: Point, beta: Point) -> Result<f64> {
    check_unit(beta)?;
    if beta[0] <= 0.0 || beta[1] <= 0.0 {
        return Err(DpgError::InvalidArgument(format!(
            "closed form needs positive beta components, got ({}, {})",
            beta[0], beta[1]
        )));
    }
    Ok((point[0] / beta[0]).min(point[1] / beta[1]))
}

/// Time to reach the inflow boundary of the unit square travelling along
/// `-beta`. Components of `beta` within `1e-14` of zero impose no bound.
pub fn inflow_travel_time(point: Point, beta: Point) -> f64 {
    let mut t = f64::INFINITY;
    for i in 0..2 {
        if beta[i] > 1e-14 {
            t = t.min(point[i] / beta[i]);
        } else if beta[i] < -1e-14 {
            t = t.min((point[i] - 1.0) / beta[i]);
        }
    }
    t
}

/// Solution of `beta . grad phi + c phi = f` with constant data and zero
/// inflow on the unit square.
pub fn ramp_solution(point: Point, beta: Point, reaction: f64, f: f64) -> f64 {
    let t = inflow_travel_time(point, beta);
    if reaction == 0.0 {
        f * t
    } else {
        f / reaction * (1.0 - (-reaction * t).exp())
    }
}

/// `||phi_H - exact||_{L2}` with the [`L2_QUADRATURE`] rule applied on the
/// [`L2_SUBDIVISION`]-fold refinement of every cell.
pub fn l2_error(
    phi: &DofMap,
    coefficients: &[f64],
    exact: &dyn Fn(Point) -> f64,
    mesh: &TriMesh,
) -> Result<f64> {
    l2_error_with_degree(phi, coefficients, exact, mesh, L2_QUADRATURE)
}

pub fn l2_error_with_degree(
    phi: &DofMap,
    coefficients: &[f64],
    exact: &dyn Fn(Point) -> f64,
    mesh: &TriMesh,
    degree: usize,
) -> Result<f64> {
    if coefficients.len() != phi.n_dofs() {
        return Err(DpgError::DimensionMismatch {
            expected: phi.n_dofs(),
            got: coefficients.len(),
        });
    }
    if phi.kind == SpaceKind::BrokenFine || phi.num_cells() != mesh.num_cells() {
        return Err(DpgError::InvalidArgument(
            "DOF map does not live on this mesh".into(),
        ));
    }
    let rule = make_quadrature(degree)?;
    let reference: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    let mut composite: Vec<(Point, f64)> = Vec::new();
    for sub in refine_cell(reference, L2_SUBDIVISION) {
        let map = AffineMap::from_vertices(&sub)?;
        composite.extend(
            rule.iter()
                .map(|(xi, w)| (map.to_physical(xi), w * map.det)),
        );
    }
    let basis = LocalBasis::new(phi.degree);
    let mut vals = vec![0.0; basis.size()];
    let mut sum = 0.0;
    for k in 0..mesh.num_cells() {
        let map = AffineMap::from_vertices(&mesh.cell_vertices(k))?;
        let dofs = phi.cell(k);
        let mut cell_sum = 0.0;
        for &(xi, w) in &composite {
            basis.fill_values(xi, &mut vals);
            let uh: f64 = dofs
                .iter()
                .zip(&vals)
                .map(|(&g, v)| coefficients[g] * v)
                .sum();
            let e = uh - exact(map.to_physical(xi));
            cell_sum += w * e * e;
        }
        sum += cell_sum * map.det.abs();
    }
    Ok(sum.sqrt())
}
