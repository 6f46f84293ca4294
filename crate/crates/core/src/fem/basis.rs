use nalgebra::Matrix2;

use crate::error::{DpgError, Result};
use crate::geometry::{AffineMap, Point};

/// Nodal Lagrange basis of total degree `k` on the reference triangle
/// `(0,0), (1,0), (0,1)`, built on the uniform node lattice `(i/k, j/k)`.
///
/// Nodes are ordered vertices first (`(0,0)`, `(1,0)`, `(0,1)`), then the
/// interior nodes of edges `0-1`, `1-2`, `2-0` in traversal order, then the
/// cell-interior nodes. With barycentric coordinates
/// `l0 = 1 - x - y, l1 = x, l2 = y` and node multi-index `(a, b, c)`,
/// `a + b + c = k`, the basis function is
/// `P_a(l0) P_b(l1) P_c(l2)` with `P_n(t) = prod_{s<n} (k t - s) / (s + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalBasis {
    degree: usize,
    /// Barycentric lattice indices per node.
    indices: Vec<[usize; 3]>,
    nodes: Vec<Point>,
}

impl LocalBasis {
    pub fn new(degree: usize) -> Self {
        if degree == 0 {
            return Self {
                degree,
                indices: vec![[0, 0, 0]],
                nodes: vec![[1.0 / 3.0, 1.0 / 3.0]],
            };
        }
        let k = degree;
        let mut indices = vec![[k, 0, 0], [0, k, 0], [0, 0, k]];
        // edge 0-1 (y = 0), x increasing
        indices.extend((1..k).map(|i| [k - i, i, 0]));
        // edge 1-2 (x + y = 1), y increasing
        indices.extend((1..k).map(|j| [0, k - j, j]));
        // edge 2-0 (x = 0), y decreasing
        indices.extend((1..k).rev().map(|j| [k - j, 0, j]));
        for j in 1..k {
            for i in 1..k - j {
                indices.push([k - i - j, i, j]);
            }
        }
        let nodes = indices
            .iter()
            .map(|&[_, i, j]| [i as f64 / k as f64, j as f64 / k as f64])
            .collect();
        Self {
            degree,
            indices,
            nodes,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    /// Values at `point`, rejecting points outside the reference triangle.
    pub fn eval(&self, point: Point) -> Result<Vec<f64>> {
        check_inside(point)?;
        let mut out = vec![0.0; self.size()];
        self.fill_values(point, &mut out);
        Ok(out)
    }

    /// Physical gradients on the affine image with reference Jacobian
    /// `jacobian`.
    pub fn eval_gradients(&self, point: Point, jacobian: &Matrix2<f64>) -> Result<Vec<Point>> {
        check_inside(point)?;
        let map = AffineMap::new([0.0, 0.0], *jacobian)?;
        let mut out = vec![[0.0; 2]; self.size()];
        self.fill_gradients(point, &mut out);
        for g in &mut out {
            *g = map.push_gradient(*g);
        }
        Ok(out)
    }

    pub fn fill_values(&self, point: Point, out: &mut [f64]) {
        let lam = barycentric(point);
        let k = self.degree as f64;
        for (o, idx) in out.iter_mut().zip(&self.indices) {
            *o = (0..3).map(|c| lattice_poly(idx[c], k, lam[c]).0).product();
        }
    }

    /// Reference-coordinate gradients.
    pub fn fill_gradients(&self, point: Point, out: &mut [Point]) {
        const DLAM: [Point; 3] = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
        let lam = barycentric(point);
        let k = self.degree as f64;
        for (o, idx) in out.iter_mut().zip(&self.indices) {
            let p: [(f64, f64); 3] = std::array::from_fn(|c| lattice_poly(idx[c], k, lam[c]));
            let dl = [
                p[0].1 * p[1].0 * p[2].0,
                p[0].0 * p[1].1 * p[2].0,
                p[0].0 * p[1].0 * p[2].1,
            ];
            *o = [
                (0..3).map(|c| dl[c] * DLAM[c][0]).sum(),
                (0..3).map(|c| dl[c] * DLAM[c][1]).sum(),
            ];
        }
    }

    /// Nodal interpolant coefficients of `f` given in reference coordinates.
    pub fn interpolate(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&p| f(p)).collect()
    }
}

fn barycentric(p: Point) -> [f64; 3] {
    [1.0 - p[0] - p[1], p[0], p[1]]
}

fn check_inside(p: Point) -> Result<()> {
    if barycentric(p).iter().any(|&l| l < -1e-12) || !p[0].is_finite() || !p[1].is_finite() {
        return Err(DpgError::OutsideReference(p[0], p[1]));
    }
    Ok(())
}

/// `P_n(t) = prod_{s<n} (k t - s) / (s + 1)` and its derivative in `t`.
fn lattice_poly(n: usize, k: f64, t: f64) -> (f64, f64) {
    let mut value = 1.0;
    let mut deriv = 0.0;
    for s in 0..n {
        let s = s as f64;
        let factor = (k * t - s) / (s + 1.0);
        deriv = deriv * factor + value * k / (s + 1.0);
        value *= factor;
    }
    (value, deriv)
}
