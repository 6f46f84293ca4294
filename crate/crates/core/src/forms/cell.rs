use crate::error::Result;
use crate::geometry::{sub, AffineMap, Point};
use crate::mesh::{refine_cell, MeshPair};

/// Geometry of one coarse cell and its fine subdivision, expressed relative
/// to the cell's first vertex.
///
/// Working in translated coordinates makes every local matrix depend on the
/// Jacobian only, so translated copies of a cell produce bit-identical
/// blocks.
#[derive(Clone, Debug)]
pub struct LocalCell {
    /// Physical position of the first vertex.
    pub origin: Point,
    /// Reference map of the coarse cell (origin at zero).
    pub coarse: AffineMap,
    /// Reference maps of the fine cells, in [`refine_cell`] order.
    pub fine: Vec<AffineMap>,
    pub level: u32,
}

impl LocalCell {
    pub fn new(vertices: [Point; 3], level: u32) -> Result<Self> {
        let origin = vertices[0];
        let rel = vertices.map(|v| sub(v, origin));
        let coarse = AffineMap::from_vertices(&rel)?;
        let fine = refine_cell(rel, level)
            .iter()
            .map(AffineMap::from_vertices)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            origin,
            coarse,
            fine,
            level,
        })
    }

    /// Coarse cell `k` of `pair` with the pair's refinement level.
    pub fn from_pair(pair: &MeshPair, k: usize) -> Result<Self> {
        Self::new(pair.coarse.cell_vertices(k), pair.level)
    }

    pub fn area(&self) -> f64 {
        0.5 * self.coarse.det
    }
}
