//! Global system assembly, inflow conditions and characteristic pinning.

mod constraints;

pub use constraints::{
    apply_dirichlet, inflow_mask, pin_characteristic_dofs, BoundaryMask, CHARACTERISTIC_TOL,
};

use std::collections::BTreeMap;

use crate::error::{DpgError, Result};
use crate::fem::{build_dof_map, DofMap, SpaceKind};
use crate::forms::{local_load, BilinearForm, InnerProduct, LocalCell};
use crate::geometry::Point;
use crate::mesh::MeshPair;
use crate::solve::CsrMatrix;
use crate::testspace::{near_optimal_load, CoefficientCache, NearOptimalTestSpace};

/// Global numbering of the trial variables, blocked by variable: all DOFs of
/// block 0 come first, then those of block 1, and so on.
#[derive(Clone, Debug)]
pub struct SolutionLayout {
    maps: Vec<DofMap>,
    offsets: Vec<usize>,
}

impl SolutionLayout {
    pub fn new(maps: Vec<DofMap>) -> Self {
        let mut offsets = vec![0];
        for m in &maps {
            offsets.push(offsets.last().unwrap() + m.n_dofs());
        }
        Self { maps, offsets }
    }

    /// `[phi, theta]` for the transport problem with trial parameter `m`.
    pub fn transport(pair: &MeshPair, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(DpgError::InvalidArgument(
                "trial parameter m must be >= 1".into(),
            ));
        }
        Ok(Self::new(vec![
            build_dof_map(SpaceKind::BrokenCoarse, m - 1, pair)?,
            build_dof_map(SpaceKind::ContinuousCoarse, m, pair)?,
        ]))
    }

    pub fn n_dofs(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn blocks(&self) -> usize {
        self.maps.len()
    }

    pub fn map(&self, block: usize) -> &DofMap {
        &self.maps[block]
    }

    pub fn offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    pub fn block_range(&self, block: usize) -> std::ops::Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }

    /// Global indices of all trial functions on coarse cell `k`, in local
    /// (stacked) order.
    pub fn cell_dofs(&self, k: usize) -> Vec<usize> {
        self.maps
            .iter()
            .zip(&self.offsets)
            .flat_map(|(m, &o)| m.cell(k).iter().map(move |&i| i + o))
            .collect()
    }

    /// Restriction of a global vector to block `block`.
    pub fn block<'a>(&self, x: &'a [f64], block: usize) -> &'a [f64] {
        &x[self.block_range(block)]
    }

    fn check_against(&self, form: &BilinearForm, coarse_cells: usize) -> Result<()> {
        let trial = form.trial_spaces();
        if trial.len() != self.maps.len() {
            return Err(DpgError::DimensionMismatch {
                expected: trial.len(),
                got: self.maps.len(),
            });
        }
        for (s, m) in trial.iter().zip(&self.maps) {
            if s.kind() != m.kind || s.degree() != m.degree || s.kind() == SpaceKind::BrokenFine {
                return Err(DpgError::InvalidArgument(format!(
                    "trial space {:?}/{} does not match DOF map {:?}/{}",
                    s.kind(),
                    s.degree(),
                    m.kind,
                    m.degree
                )));
            }
            if m.num_cells() != coarse_cells {
                return Err(DpgError::DimensionMismatch {
                    expected: coarse_cells,
                    got: m.num_cells(),
                });
            }
        }
        Ok(())
    }
}

/// Sparse symmetric system `A x = F` with its constraint record.
#[derive(Clone, Debug)]
pub struct GlobalSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Constrained global index and prescribed value.
    pub constraints: BTreeMap<usize, f64>,
    offsets: Vec<usize>,
}

impl GlobalSystem {
    /// Wraps an existing matrix; `block_sizes` partitions the unknowns.
    pub fn from_parts(matrix: CsrMatrix, rhs: Vec<f64>, block_sizes: &[usize]) -> Result<Self> {
        let mut offsets = vec![0];
        for s in block_sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        let n = *offsets.last().unwrap();
        if matrix.dim() != n || rhs.len() != n {
            return Err(DpgError::DimensionMismatch {
                expected: n,
                got: rhs.len().max(matrix.dim()),
            });
        }
        Ok(Self {
            matrix,
            rhs,
            constraints: BTreeMap::new(),
            offsets,
        })
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    pub fn block_offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    /// Relative asymmetry `max |A - A^T| / max |A|`.
    pub fn relative_asymmetry(&self) -> f64 {
        let scale = self.matrix.max_abs();
        if scale == 0.0 {
            0.0
        } else {
            self.matrix.asymmetry() / scale
        }
    }

    /// Symmetric elimination of prescribed values: the right-hand side is
    /// corrected by the constrained columns, the constrained rows and
    /// columns are zeroed and the diagonal set to one.
    pub fn constrain(&mut self, dofs: &[(usize, f64)]) {
        if dofs.is_empty() {
            return;
        }
        let mut flag = vec![false; self.dim()];
        for &(i, g) in dofs {
            flag[i] = true;
            if g != 0.0 {
                let (cols, vals) = self.matrix.row(i);
                for (&j, &a) in cols.iter().zip(vals) {
                    self.rhs[j] -= a * g;
                }
            }
        }
        self.matrix.for_each_mut(|i, j, v| {
            if flag[i] || flag[j] {
                *v = if i == j { 1.0 } else { 0.0 };
            }
        });
        for &(i, g) in dofs {
            self.rhs[i] = g;
            self.constraints.insert(i, g);
        }
    }
}

/// Assembles `A = sum_K scatter(G_K^T B_K^{-1} G_K)` and
/// `F = sum_K scatter(C_K^T l_K)` over the coarse cells of `pair`.
pub fn assemble(
    form: &BilinearForm,
    inner: &InnerProduct,
    pair: &MeshPair,
    layout: &SolutionLayout,
    rhs: &dyn Fn(Point) -> f64,
    cache: &dyn CoefficientCache,
) -> Result<GlobalSystem> {
    let nc = pair.coarse.num_cells();
    layout.check_against(form, nc)?;
    if form.test_spaces().len() != 1 {
        return Err(DpgError::InvalidArgument(
            "assembly supports a single scalar test variable".into(),
        ));
    }
    let test = &form.test_spaces()[0];
    let cell_dofs: Vec<Vec<usize>> = (0..nc).map(|k| layout.cell_dofs(k)).collect();
    let mut matrix = CsrMatrix::from_groups(layout.n_dofs(), cell_dofs.iter().map(Vec::as_slice));
    let mut f = vec![0.0; layout.n_dofs()];
    let space = NearOptimalTestSpace::new(form, inner, cache);
    for (k, dofs) in cell_dofs.iter().enumerate() {
        let cell = LocalCell::from_pair(pair, k)?;
        let local = space.local_solve(&cell, k)?;
        let load = local_load(rhs, &cell, test);
        let fk = near_optimal_load(&local.coefficients, &load);
        for (a, &i) in dofs.iter().enumerate() {
            f[i] += fk[a];
            for (b, &j) in dofs.iter().enumerate() {
                matrix.add(i, j, local.stiffness[(a, b)]);
            }
        }
    }
    Ok(GlobalSystem {
        matrix,
        rhs: f,
        constraints: BTreeMap::new(),
        offsets: layout.offsets.clone(),
    })
}
