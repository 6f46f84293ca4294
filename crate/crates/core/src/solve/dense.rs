use nalgebra::{DMatrix, DVector};

use crate::error::{DpgError, Result};

/// Lower-triangular `L` with `L L^T = A`.
#[derive(Clone, Debug)]
pub struct CholeskyFactor {
    l: DMatrix<f64>,
}

/// Unpivoted Cholesky. Fails when a pivot drops to `1e-14 * max(diag A)`.
pub fn cholesky_factor(a: &DMatrix<f64>) -> Result<CholeskyFactor> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(DpgError::DimensionMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    let scale = a.amax();
    for i in 0..n {
        for j in 0..i {
            if (a[(i, j)] - a[(j, i)]).abs() > 1e-12 * scale {
                return Err(DpgError::InvalidArgument(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let max_diag = (0..n).map(|i| a[(i, i)]).fold(0.0f64, f64::max);
    let threshold = 1e-14 * max_diag;
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= threshold || !d.is_finite() {
            return Err(DpgError::NotPositiveDefinite { index: j, pivot: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(CholeskyFactor { l })
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    pub fn lower(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.l * self.l.transpose()
    }

    /// Smallest diagonal entry of `L`.
    pub fn min_pivot(&self) -> f64 {
        self.l.diagonal().min()
    }

    /// Solves in place for every column of `rhs`.
    pub fn solve_in_place(&self, rhs: &mut DMatrix<f64>) {
        let n = self.dim();
        assert_eq!(rhs.nrows(), n, "right-hand side has wrong row count");
        for c in 0..rhs.ncols() {
            let mut col = rhs.column_mut(c);
            for i in 0..n {
                let mut s = col[i];
                for k in 0..i {
                    s -= self.l[(i, k)] * col[k];
                }
                col[i] = s / self.l[(i, i)];
            }
            for i in (0..n).rev() {
                let mut s = col[i];
                for k in i + 1..n {
                    s -= self.l[(k, i)] * col[k];
                }
                col[i] = s / self.l[(i, i)];
            }
        }
    }

    pub fn solve(&self, rhs: &DMatrix<f64>) -> DMatrix<f64> {
        let mut x = rhs.clone();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_vec(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let mut x = DMatrix::from_column_slice(rhs.len(), 1, rhs.as_slice());
        self.solve_in_place(&mut x);
        DVector::from_column_slice(x.as_slice())
    }
}
