//! Bilinear forms and inner products as sums of elementary integral terms.
//!
//! Every term is an integral over a coarse cell `K` (or over the boundaries
//! of the fine cells inside `K`) of a product of a test-side factor and a
//! trial-side factor. Test spaces may be broken on the fine cells, which is
//! why interior integrals always run over the fine subdivision held by a
//! [`LocalCell`].

mod cell;
mod space;
mod term;
mod transport;

pub use cell::LocalCell;
pub use space::Space;
pub use term::{term_local_matrix, Domain, IntegralTerm, IntegrationType, SIGN_TOL};
pub use transport::{graph_inner_product, transport_bilinear_form};

use nalgebra::{DMatrix, DVector};

use crate::error::{DpgError, Result};
use crate::fem::make_quadrature;
use crate::geometry::{add, Point};

/// Cell-wise bilinear form `b_K` between ordered test and trial spaces.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    test_spaces: Vec<Space>,
    trial_spaces: Vec<Space>,
    terms: Vec<IntegralTerm>,
}

impl BilinearForm {
    pub fn new(
        test_spaces: Vec<Space>,
        trial_spaces: Vec<Space>,
        terms: Vec<IntegralTerm>,
    ) -> Result<Self> {
        for t in &terms {
            if t.test >= test_spaces.len() || t.trial >= trial_spaces.len() {
                return Err(DpgError::InvalidTerm(format!(
                    "space indices ({}, {}) out of range ({} test, {} trial)",
                    t.test,
                    t.trial,
                    test_spaces.len(),
                    trial_spaces.len()
                )));
            }
        }
        Ok(Self {
            test_spaces,
            trial_spaces,
            terms,
        })
    }

    pub fn test_spaces(&self) -> &[Space] {
        &self.test_spaces
    }

    pub fn trial_spaces(&self) -> &[Space] {
        &self.trial_spaces
    }

    pub fn terms(&self) -> &[IntegralTerm] {
        &self.terms
    }

    /// Local matrix with rows indexed by stacked test DOFs and columns by
    /// stacked trial DOFs.
    pub fn local_matrix(&self, cell: &LocalCell) -> DMatrix<f64> {
        assemble_terms(&self.terms, &self.test_spaces, &self.trial_spaces, cell)
    }
}

/// Symmetric form on an ordered collection of test spaces.
#[derive(Clone, Debug)]
pub struct InnerProduct {
    spaces: Vec<Space>,
    terms: Vec<IntegralTerm>,
}

impl InnerProduct {
    pub fn new(spaces: Vec<Space>, terms: Vec<IntegralTerm>) -> Result<Self> {
        for t in &terms {
            if t.test >= spaces.len() || t.trial >= spaces.len() {
                return Err(DpgError::InvalidTerm(format!(
                    "space indices ({}, {}) out of range ({} spaces)",
                    t.test,
                    t.trial,
                    spaces.len()
                )));
            }
        }
        Ok(Self { spaces, terms })
    }

    pub fn spaces(&self) -> &[Space] {
        &self.spaces
    }

    pub fn terms(&self) -> &[IntegralTerm] {
        &self.terms
    }

    pub fn local_matrix(&self, cell: &LocalCell) -> DMatrix<f64> {
        assemble_terms(&self.terms, &self.spaces, &self.spaces, cell)
    }
}

fn offsets(spaces: &[Space], cell: &LocalCell) -> Vec<usize> {
    let mut out = Vec::with_capacity(spaces.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in spaces {
        acc += s.local_dim(cell);
        out.push(acc);
    }
    out
}

fn assemble_terms(
    terms: &[IntegralTerm],
    tests: &[Space],
    trials: &[Space],
    cell: &LocalCell,
) -> DMatrix<f64> {
    let ro = offsets(tests, cell);
    let co = offsets(trials, cell);
    let mut m = DMatrix::zeros(ro[tests.len()], co[trials.len()]);
    for t in terms {
        let block = term_local_matrix(t, cell, &tests[t.test], &trials[t.trial]);
        let mut view = m.view_mut((ro[t.test], co[t.trial]), block.shape());
        view += &block;
    }
    m
}

/// Returns `(B_K, G_K)`: the Gram matrix of the inner product on the test
/// side and the bilinear form tested against that basis.
pub fn local_saddle_blocks(
    form: &BilinearForm,
    inner: &InnerProduct,
    cell: &LocalCell,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if form.test_spaces() != inner.spaces() {
        return Err(DpgError::InvalidArgument(
            "bilinear form and inner product use different test spaces".into(),
        ));
    }
    Ok((inner.local_matrix(cell), form.local_matrix(cell)))
}

/// `(l_K)_j = int_K f z^j`, integrated over the fine cells of `cell`.
pub fn local_load(f: &dyn Fn(Point) -> f64, cell: &LocalCell, space: &Space) -> DVector<f64> {
    let n = space.local_dim(cell);
    let mut out = DVector::zeros(n);
    let rule = make_quadrature((space.degree() + 2).min(crate::fem::MAX_EXACTNESS))
        .expect("degree within table");
    let size = space.basis().size();
    let mut vals = vec![0.0; size];
    for (fi, fmap) in cell.fine.iter().enumerate() {
        for (xi, w) in rule.iter() {
            let x = fmap.to_physical(xi);
            let weight = w * fmap.det.abs() * f(add(cell.origin, x));
            if weight == 0.0 {
                continue;
            }
            let off = space.values_at(cell, fi, x, &mut vals);
            for (j, v) in vals.iter().enumerate() {
                out[off + j] += weight * v;
            }
        }
    }
    out
}
