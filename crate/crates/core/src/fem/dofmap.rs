use std::collections::HashMap;

use super::LocalBasis;
use crate::error::{DpgError, Result};
use crate::geometry::{AffineMap, Point};
use crate::mesh::{quantize, MeshPair};

/// Where a polynomial space lives and how its cells are glued.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// One independent polynomial per coarse cell.
    BrokenCoarse,
    /// Globally continuous Lagrange space on the coarse mesh.
    ContinuousCoarse,
    /// One independent polynomial per fine cell.
    BrokenFine,
}

/// Cell to global index table of one space.
#[derive(Clone, Debug)]
pub struct DofMap {
    pub kind: SpaceKind,
    pub degree: usize,
    local_size: usize,
    indices: Vec<usize>,
    n_dofs: usize,
    /// Physical coordinates of each global nodal DOF.
    pub node_points: Vec<Point>,
}

impl DofMap {
    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    pub fn local_size(&self) -> usize {
        self.local_size
    }

    pub fn num_cells(&self) -> usize {
        self.indices.len() / self.local_size
    }

    /// Global indices of cell `k` (coarse cell, or fine cell for
    /// [`SpaceKind::BrokenFine`]), ordered like the local basis.
    pub fn cell(&self, k: usize) -> &[usize] {
        &self.indices[k * self.local_size..(k + 1) * self.local_size]
    }
}

/// Builds the DOF map of a Lagrange space of `degree` on `pair`.
pub fn build_dof_map(kind: SpaceKind, degree: usize, pair: &MeshPair) -> Result<DofMap> {
    if kind == SpaceKind::ContinuousCoarse && degree == 0 {
        return Err(DpgError::InvalidArgument(
            "continuous Lagrange space needs degree >= 1".into(),
        ));
    }
    let basis = LocalBasis::new(degree);
    let mesh = match kind {
        SpaceKind::BrokenFine => &pair.fine,
        _ => &pair.coarse,
    };
    let local_size = basis.size();
    let mut indices = Vec::with_capacity(mesh.num_cells() * local_size);
    let mut node_points = Vec::new();
    let mut lookup: HashMap<(i64, i64), usize> = HashMap::new();
    for k in 0..mesh.num_cells() {
        let map = AffineMap::from_vertices(&mesh.cell_vertices(k))?;
        for &xi in basis.nodes() {
            let x = map.to_physical(xi);
            let id = match kind {
                SpaceKind::ContinuousCoarse => *lookup.entry(quantize(x)).or_insert_with(|| {
                    node_points.push(x);
                    node_points.len() - 1
                }),
                _ => {
                    node_points.push(x);
                    node_points.len() - 1
                }
            };
            indices.push(id);
        }
    }
    Ok(DofMap {
        kind,
        degree,
        local_size,
        n_dofs: node_points.len(),
        indices,
        node_points,
    })
}
