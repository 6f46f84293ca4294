use super::GlobalSystem;
use crate::error::{DpgError, Result};
use crate::fem::{DofMap, LocalBasis, SpaceKind};
use crate::forms::LocalCell;
use crate::geometry::{distance_to_segment, dot, outward_normal, Point, GEOM_TOL};
use crate::mesh::{check_unit, MeshPair, TriMesh};

/// `|beta . n|` at or below this counts as characteristic; `beta . n` below
/// its negative counts as inflow.
pub const CHARACTERISTIC_TOL: f64 = 1e-10;

/// Per-DOF flags of one trial block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMask {
    pub marked: Vec<bool>,
}

impl BoundaryMask {
    pub fn none(n: usize) -> Self {
        Self {
            marked: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.marked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marked.is_empty()
    }

    pub fn count(&self) -> usize {
        self.marked.iter().filter(|&&m| m).count()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.marked
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i)
    }
}

/// Marks every node of `theta` lying on a boundary edge of `mesh` with
/// `beta . n < -CHARACTERISTIC_TOL`.
pub fn inflow_mask(theta: &DofMap, mesh: &TriMesh, beta: Point) -> Result<BoundaryMask> {
    check_unit(beta)?;
    if theta.kind != SpaceKind::ContinuousCoarse {
        return Err(DpgError::InvalidArgument(
            "inflow mask needs a continuous coarse space".into(),
        ));
    }
    let mut mask = BoundaryMask::none(theta.n_dofs());
    for face in mesh.faces.iter().filter(|f| f.is_boundary()) {
        if dot(beta, face.normal) >= -CHARACTERISTIC_TOL {
            continue;
        }
        let [a, b] = face.endpoints;
        for &g in theta.cell(face.owner) {
            if distance_to_segment(theta.node_points[g], a, b) <= GEOM_TOL {
                mask.marked[g] = true;
            }
        }
    }
    Ok(mask)
}

/// Constrains the marked DOFs of trial block `block` to `value` by
/// symmetric elimination.
pub fn apply_dirichlet(
    system: &mut GlobalSystem,
    mask: &BoundaryMask,
    block: usize,
    value: f64,
) -> Result<()> {
    let (start, len) = block_extent(system, block)?;
    if mask.len() != len {
        return Err(DpgError::DimensionMismatch {
            expected: len,
            got: mask.len(),
        });
    }
    let dofs: Vec<(usize, f64)> = mask.indices().map(|i| (start + i, value)).collect();
    system.constrain(&dofs);
    Ok(())
}

/// Pins to zero the DOFs of `theta` (trial block `block`) whose support
/// meets only characteristic edges of the fine skeleton.
///
/// The trace term is integrated over the edges of the fine cells, so an
/// edge interior to a coarse cell counts as part of the support.
/// Returns the pinned block-local indices.
pub fn pin_characteristic_dofs(
    system: &mut GlobalSystem,
    theta: &DofMap,
    block: usize,
    pair: &MeshPair,
    beta: Point,
) -> Result<Vec<usize>> {
    check_unit(beta)?;
    let (start, len) = block_extent(system, block)?;
    if theta.n_dofs() != len {
        return Err(DpgError::DimensionMismatch {
            expected: len,
            got: theta.n_dofs(),
        });
    }
    let active = transported_dofs(theta, pair, beta)?;
    let pinned: Vec<usize> = (0..len)
        .filter(|&i| !active[i] && !system.constraints.contains_key(&(start + i)))
        .collect();
    let dofs: Vec<(usize, f64)> = pinned.iter().map(|&i| (start + i, 0.0)).collect();
    system.constrain(&dofs);
    Ok(pinned)
}

/// `true` for DOFs whose basis function is nonzero on at least one fine
/// edge with `|beta . n| > CHARACTERISTIC_TOL`.
fn transported_dofs(theta: &DofMap, pair: &MeshPair, beta: Point) -> Result<Vec<bool>> {
    let basis = LocalBasis::new(theta.degree);
    let samples: Vec<f64> = (0..=theta.degree)
        .map(|j| (j + 1) as f64 / (theta.degree + 2) as f64)
        .collect();
    let reference: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    let mut active = vec![false; theta.n_dofs()];
    let mut vals = vec![0.0; basis.size()];
    for k in 0..pair.coarse.num_cells() {
        let cell = LocalCell::from_pair(pair, k)?;
        let dofs = theta.cell(k);
        for map in &cell.fine {
            let v = reference.map(|r| map.to_physical(r));
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                if dot(beta, outward_normal(a, b)).abs() <= CHARACTERISTIC_TOL {
                    continue;
                }
                for &t in &samples {
                    let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                    basis.fill_values(cell.coarse.to_reference(x), &mut vals);
                    for (i, &g) in dofs.iter().enumerate() {
                        if vals[i].abs() > 1e-10 {
                            active[g] = true;
                        }
                    }
                }
            }
        }
    }
    Ok(active)
}

fn block_extent(system: &GlobalSystem, block: usize) -> Result<(usize, usize)> {
    if block + 1 >= system.offsets.len() {
        return Err(DpgError::InvalidArgument(format!(
            "trial block {block} does not exist"
        )));
    }
    let start = system.offsets[block];
    Ok((start, system.offsets[block + 1] - start))
}
