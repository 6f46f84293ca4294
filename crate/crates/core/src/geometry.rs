//! Small 2D geometry helpers shared by the mesh and the element code.

use nalgebra::{Matrix2, Vector2};

use crate::error::{DpgError, Result};

pub type Point = [f64; 2];

/// Absolute tolerance for geometric comparisons.
pub const GEOM_TOL: f64 = 1e-12;

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

/// Twice the signed area of the triangle `(a, b, c)`.
#[inline]
pub fn cross(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

pub fn signed_area(v: &[Point; 3]) -> f64 {
    0.5 * cross(v[0], v[1], v[2])
}

/// Outward unit normal of the edge `a -> b` of a counter-clockwise polygon.
#[inline]
pub fn outward_normal(a: Point, b: Point) -> Point {
    let d = sub(b, a);
    let len = norm(d);
    [d[1] / len, -d[0] / len]
}

/// Affine map `x = origin + J * xi` from the reference triangle
/// `(0,0), (1,0), (0,1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub origin: Point,
    pub jacobian: Matrix2<f64>,
    pub inverse: Matrix2<f64>,
    pub det: f64,
}

impl AffineMap {
    pub fn from_vertices(v: &[Point; 3]) -> Result<Self> {
        Self::new(v[0], jacobian_of(v))
    }

    pub fn new(origin: Point, jacobian: Matrix2<f64>) -> Result<Self> {
        let det = jacobian.determinant();
        let scale = jacobian.norm_squared();
        if det.abs() <= 1e-14 * scale || !det.is_finite() {
            return Err(DpgError::SingularJacobian { det });
        }
        let inverse = Matrix2::new(
            jacobian[(1, 1)],
            -jacobian[(0, 1)],
            -jacobian[(1, 0)],
            jacobian[(0, 0)],
        ) / det;
        Ok(Self {
            origin,
            jacobian,
            inverse,
            det,
        })
    }

    #[inline]
    pub fn to_physical(&self, xi: Point) -> Point {
        let v = self.jacobian * Vector2::new(xi[0], xi[1]);
        [self.origin[0] + v[0], self.origin[1] + v[1]]
    }

    #[inline]
    pub fn to_reference(&self, x: Point) -> Point {
        let v = self.inverse * Vector2::new(x[0] - self.origin[0], x[1] - self.origin[1]);
        [v[0], v[1]]
    }

    /// Maps a reference gradient to physical coordinates with `J^{-T}`.
    #[inline]
    pub fn push_gradient(&self, g: Point) -> Point {
        let inv = &self.inverse;
        [
            inv[(0, 0)] * g[0] + inv[(1, 0)] * g[1],
            inv[(0, 1)] * g[0] + inv[(1, 1)] * g[1],
        ]
    }
}

pub fn jacobian_of(v: &[Point; 3]) -> Matrix2<f64> {
    Matrix2::new(
        v[1][0] - v[0][0],
        v[2][0] - v[0][0],
        v[1][1] - v[0][1],
        v[2][1] - v[0][1],
    )
}

/// Distance of `p` from the closed segment `[a, b]`.
pub fn distance_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let d = sub(b, a);
    let len2 = dot(d, d);
    let t = if len2 == 0.0 {
        0.0
    } else {
        (dot(sub(p, a), d) / len2).clamp(0.0, 1.0)
    };
    norm(sub(p, [a[0] + t * d[0], a[1] + t * d[1]]))
}
