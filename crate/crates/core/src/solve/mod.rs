//! Dense Cholesky for cell-local Gram systems and sparse SPD solvers for the
//! global system.

mod cg;
mod dense;
mod sparse;
mod strategy;

pub use cg::{cg_solve, CgReport, DEFAULT_TOL};
pub use dense::{cholesky_factor, CholeskyFactor};
pub use sparse::CsrMatrix;
pub use strategy::{
    solver_registry, DenseCholesky, GlobalSolver, JacobiCg, SolveOptions, DENSE_LIMIT,
};
