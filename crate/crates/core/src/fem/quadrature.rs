use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{DpgError, Result};
use crate::geometry::Point;

/// Highest exactness degree available in the rule table.
pub const MAX_EXACTNESS: usize = 12;

/// Triangle and edge rules sharing one exactness degree.
///
/// The triangle rule lives on the reference triangle `(0,0), (1,0), (0,1)`
/// (weights sum to 1/2), the edge rule on `[0, 1]` (weights sum to 1).
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub degree: usize,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub edge_points: Vec<f64>,
    pub edge_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        self.points
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    pub fn edge_iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.edge_points
            .iter()
            .copied()
            .zip(self.edge_weights.iter().copied())
    }
}

/// Gauss-Legendre nodes and weights with `n` points, mapped to `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d.is_finite() {
            dp = d;
        }
        nodes.push(0.5 * (1.0 - x));
        weights.push(1.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Collapsed (Duffy) Gauss product rule: `x = u, y = v (1 - u)`.
fn build_rule(degree: usize) -> QuadratureRule {
    let nu = (degree + 2).div_ceil(2);
    let nv = (degree + 1).div_ceil(2).max(1);
    let (u, wu) = gauss_legendre(nu);
    let (v, wv) = gauss_legendre(nv);
    let mut points = Vec::with_capacity(nu * nv);
    let mut weights = Vec::with_capacity(nu * nv);
    for (&ui, &wi) in u.iter().zip(&wu) {
        for (&vj, &wj) in v.iter().zip(&wv) {
            points.push([ui, vj * (1.0 - ui)]);
            weights.push(wi * wj * (1.0 - ui));
        }
    }
    let ne = (degree + 1).div_ceil(2).max(1);
    let (edge_points, edge_weights) = gauss_legendre(ne);
    QuadratureRule {
        degree,
        points,
        weights,
        edge_points,
        edge_weights,
    }
}

fn table() -> &'static [QuadratureRule] {
    static TABLE: OnceLock<Vec<QuadratureRule>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=MAX_EXACTNESS).map(build_rule).collect())
}

/// Rule integrating every polynomial of total degree `<= degree` exactly.
pub fn make_quadrature(degree: usize) -> Result<&'static QuadratureRule> {
    table().get(degree).ok_or(DpgError::QuadratureDegree {
        degree,
        max: MAX_EXACTNESS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// `int_T x^a y^b = a! b! / (a + b + 2)!` on the reference triangle.
    fn monomial_integral(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn closed_form_examples() {
        let r = make_quadrature(4).unwrap();
        let int = |f: &dyn Fn(Point) -> f64| r.iter().map(|(p, w)| w * f(p)).sum::<f64>();
        assert!((int(&|_| 1.0) - 0.5).abs() < 1e-15);
        assert!((int(&|p| p[0]) - 1.0 / 6.0).abs() < 1e-15);
        assert!((int(&|p| p[0] * p[0] * p[1]) - 1.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn weights_positive_and_normalized() {
        for d in 0..=MAX_EXACTNESS {
            let r = make_quadrature(d).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.edge_weights.iter().all(|&w| w > 0.0));
            assert!((r.weights.iter().sum::<f64>() - 0.5).abs() < 1e-14);
            assert!((r.edge_weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(r
                .points
                .iter()
                .all(|p| p[0] >= 0.0 && p[1] >= 0.0 && p[0] + p[1] <= 1.0));
        }
    }

    #[test]
    fn monomials_integrated_exactly() {
        for d in 0..=MAX_EXACTNESS {
            let r = make_quadrature(d).unwrap();
            for a in 0..=d as u32 {
                for b in 0..=(d as u32 - a) {
                    let q: f64 = r
                        .iter()
                        .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32))
                        .sum();
                    let exact = monomial_integral(a, b);
                    assert!((q - exact).abs() < 1e-13, "degree {d}, x^{a} y^{b}");
                }
                let e: f64 = r.edge_iter().map(|(t, w)| w * t.powi(a as i32)).sum();
                assert!((e - 1.0 / (a as f64 + 1.0)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn degree_above_table_is_an_error() {
        assert!(matches!(
            make_quadrature(13),
            Err(DpgError::QuadratureDegree { degree: 13, .. })
        ));
    }

    #[test]
    fn twelve_point_gauss_legendre() {
        let (x, w) = gauss_legendre(12);
        assert_eq!(x.len(), 12);
        let q: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(23)).sum();
        assert!((q - 1.0 / 24.0).abs() < 1e-14);
    }
}
