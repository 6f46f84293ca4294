use super::CsrMatrix;
use crate::error::{DpgError, Result};

/// Default relative residual tolerance for the global solve.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CgReport {
    pub iterations: usize,
    /// `||F - A x||_2` at exit.
    pub residual_norm: f64,
    pub converged: bool,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
///
/// Convergence is declared on the true residual `||F - A x|| <= tol ||F||`;
/// when the recursively updated residual passes but the true one does not,
/// the iteration restarts from the true residual.
pub fn cg_solve(
    a: &CsrMatrix,
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, CgReport)> {
    let n = a.dim();
    if rhs.len() != n {
        return Err(DpgError::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    if rhs.iter().any(|v| !v.is_finite()) {
        return Err(DpgError::NanEncountered { iteration: 0 });
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut x = vec![0.0; n];
    let target = tol * norm2(rhs);
    let mut r = rhs.to_vec();
    if norm2(&r) <= target {
        let residual_norm = norm2(&r);
        return Ok((
            x,
            CgReport {
                iterations: 0,
                residual_norm,
                converged: true,
            },
        ));
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        a.mul_vec(&p, &mut ap);
        let pap = dot(&p, &ap);
        let alpha = rz / pap;
        if !alpha.is_finite() {
            return Err(DpgError::NanEncountered {
                iteration: iterations,
            });
        }
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if norm2(&r) <= target {
            // confirm on the true residual
            a.mul_vec(&x, &mut ap);
            for i in 0..n {
                r[i] = rhs[i] - ap[i];
            }
            let true_norm = norm2(&r);
            if true_norm <= target {
                return Ok((
                    x,
                    CgReport {
                        iterations,
                        residual_norm: true_norm,
                        converged: true,
                    },
                ));
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
            }
            p.copy_from_slice(&z);
            rz = dot(&r, &z);
            continue;
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    a.mul_vec(&x, &mut ap);
    let residual: Vec<f64> = rhs.iter().zip(&ap).map(|(f, y)| f - y).collect();
    let residual_norm = norm2(&residual);
    if !residual_norm.is_finite() {
        return Err(DpgError::NanEncountered {
            iteration: iterations,
        });
    }
    Ok((
        x,
        CgReport {
            iterations,
            residual_norm,
            converged: residual_norm <= target,
        },
    ))
}
