//! Reference-element machinery: Lagrange bases, quadrature and DOF maps.

mod basis;
mod dofmap;
mod quadrature;

pub use basis::LocalBasis;
pub use dofmap::{build_dof_map, DofMap, SpaceKind};
pub use quadrature::{gauss_legendre, make_quadrature, QuadratureRule, MAX_EXACTNESS};
