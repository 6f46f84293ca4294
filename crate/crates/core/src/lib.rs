//! Discontinuous Petrov-Galerkin (DPG) discretization of first-order linear
//! transport on the unit square in ultra-weak form.
//!
//! The pipeline is:
//!
//! 1. [`mesh`] builds a uniform coarse triangulation and its red refinement.
//! 2. [`fem`] provides Lagrange bases, quadrature and degree-of-freedom maps.
//! 3. [`forms`] describes bilinear forms and inner products as sums of
//!    elementary integral terms and evaluates them cell by cell.
//! 4. [`testspace`] solves the cell-local Gram systems that define the
//!    near-optimal test functions, with a pluggable coefficient cache.
//! 5. [`assembly`] scatters the local blocks into a sparse SPD system and
//!    applies inflow and characteristic constraints.
//! 6. [`solve`] holds the dense Cholesky and the global sparse solvers.
//! 7. [`estimator`] evaluates the localized residual estimator and exact
//!    errors against the ramp solution.
//!
//! Interchangeable strategies (global solvers, coefficient caches) are
//! registered by name in a [`registry::Registry`] and picked at runtime.
//!
//! ```
//! use dpg_core::assembly::{apply_dirichlet, assemble, inflow_mask, pin_characteristic_dofs, SolutionLayout};
//! use dpg_core::fem::SpaceKind;
//! use dpg_core::forms::{graph_inner_product, transport_bilinear_form, Space};
//! use dpg_core::mesh::MeshPair;
//! use dpg_core::solve::{solver_registry, SolveOptions};
//! use dpg_core::testspace::KeyedCache;
//!
//! # fn main() -> dpg_core::Result<()> {
//! let beta = [0.6, 0.8];
//! let pair = MeshPair::uniform(3, 1);
//! let test = Space::new(SpaceKind::BrokenFine, 3);
//! let form = transport_bilinear_form(test.clone(), beta, 0.0, 2)?;
//! let inner = graph_inner_product(test, beta)?;
//! let layout = SolutionLayout::transport(&pair, 2)?;
//! let mut sys = assemble(&form, &inner, &pair, &layout, &|_| 1.0, &KeyedCache::new())?;
//! apply_dirichlet(&mut sys, &inflow_mask(layout.map(1), &pair.coarse, beta)?, 1, 0.0)?;
//! pin_characteristic_dofs(&mut sys, layout.map(1), 1, &pair, beta)?;
//! let (x, report) = solver_registry().create("cg")?.solve(&sys.matrix, &sys.rhs, &SolveOptions::default())?;
//! assert!(report.converged);
//! assert_eq!(x.len(), layout.n_dofs());
//! # Ok(())
//! # }
//! ```

pub mod assembly;
pub mod error;
pub mod estimator;
pub mod fem;
pub mod forms;
pub mod geometry;
pub mod mesh;
pub mod registry;
pub mod solve;
pub mod testspace;

pub use error::{DpgError, Result};
