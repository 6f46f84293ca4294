use super::LocalCell;
use crate::fem::{LocalBasis, SpaceKind};
use crate::geometry::Point;

/// A polynomial space as seen from one coarse cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    kind: SpaceKind,
    basis: LocalBasis,
}

impl Space {
    pub fn new(kind: SpaceKind, degree: usize) -> Self {
        Self {
            kind,
            basis: LocalBasis::new(degree),
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn basis(&self) -> &LocalBasis {
        &self.basis
    }

    /// Number of local functions on the coarse cell.
    pub fn local_dim(&self, cell: &LocalCell) -> usize {
        match self.kind {
            SpaceKind::BrokenFine => cell.fine.len() * self.basis.size(),
            _ => self.basis.size(),
        }
    }

    fn map<'a>(&self, cell: &'a LocalCell, fine: usize) -> (&'a crate::geometry::AffineMap, usize) {
        match self.kind {
            SpaceKind::BrokenFine => (&cell.fine[fine], fine * self.basis.size()),
            _ => (&cell.coarse, 0),
        }
    }

    /// Values of the functions that are nonzero on fine cell `fine` at the
    /// cell-relative point `x`. Returns the local offset of the block.
    pub(crate) fn values_at(
        &self,
        cell: &LocalCell,
        fine: usize,
        x: Point,
        out: &mut [f64],
    ) -> usize {
        let (map, off) = self.map(cell, fine);
        self.basis.fill_values(map.to_reference(x), out);
        off
    }

    /// Values and physical gradients, see [`Space::values_at`].
    pub(crate) fn eval_at(
        &self,
        cell: &LocalCell,
        fine: usize,
        x: Point,
        vals: &mut [f64],
        grads: &mut [Point],
    ) -> usize {
        let (map, off) = self.map(cell, fine);
        let xi = map.to_reference(x);
        self.basis.fill_values(xi, vals);
        self.basis.fill_gradients(xi, grads);
        for g in grads.iter_mut() {
            *g = map.push_gradient(*g);
        }
        off
    }
}
