//! Uniform triangulations of the unit square and their red refinement.

use std::collections::HashMap;

use crate::error::{DpgError, Result};
use crate::geometry::{self, dot, norm, outward_normal, signed_area, sub, Point, GEOM_TOL};

/// A mesh edge with one or two adjacent cells.
#[derive(Clone, Debug)]
pub struct Face {
    pub vertices: [usize; 2],
    pub endpoints: [Point; 2],
    pub length: f64,
    /// Owning cell, whose outward normal is `normal`.
    pub owner: usize,
    pub neighbor: Option<usize>,
    pub normal: Point,
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        self.neighbor.is_none()
    }

    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.owner).chain(self.neighbor)
    }

    /// Outward unit normal of `cell` on this face.
    pub fn normal_of(&self, cell: usize) -> Option<Point> {
        if cell == self.owner {
            Some(self.normal)
        } else if Some(cell) == self.neighbor {
            Some([-self.normal[0], -self.normal[1]])
        } else {
            None
        }
    }
}

/// Conforming triangulation with counter-clockwise cells.
#[derive(Clone, Debug)]
pub struct TriMesh {
    pub vertices: Vec<Point>,
    pub cells: Vec<[usize; 3]>,
    pub faces: Vec<Face>,
    /// `cell_faces[k][e]` is the face running from local vertex `e` to local
    /// vertex `(e + 1) % 3`.
    pub cell_faces: Vec<[usize; 3]>,
    /// Mesh size parameter (leg length of the right triangles).
    pub size: f64,
}

impl TriMesh {
    pub fn from_cells(vertices: Vec<Point>, cells: Vec<[usize; 3]>, size: f64) -> Self {
        let mut faces: Vec<Face> = Vec::new();
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        let mut cell_faces = Vec::with_capacity(cells.len());
        for (k, cell) in cells.iter().enumerate() {
            let mut local = [0usize; 3];
            for e in 0..3 {
                let (a, b) = (cell[e], cell[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let id = *lookup.entry(key).or_insert_with(|| {
                    let (pa, pb) = (vertices[a], vertices[b]);
                    faces.push(Face {
                        vertices: [a, b],
                        endpoints: [pa, pb],
                        length: norm(sub(pb, pa)),
                        owner: k,
                        neighbor: None,
                        normal: outward_normal(pa, pb),
                    });
                    faces.len() - 1
                });
                if faces[id].owner != k {
                    faces[id].neighbor = Some(k);
                }
                local[e] = id;
            }
            cell_faces.push(local);
        }
        Self {
            vertices,
            cells,
            faces,
            cell_faces,
            size,
        }
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_vertices(&self, cell: usize) -> [Point; 3] {
        let c = self.cells[cell];
        [
            self.vertices[c[0]],
            self.vertices[c[1]],
            self.vertices[c[2]],
        ]
    }

    pub fn cell_area(&self, cell: usize) -> f64 {
        signed_area(&self.cell_vertices(cell))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_cells()).map(|k| self.cell_area(k)).sum()
    }

    /// `beta . n` on `face`, with `n` the outward normal of `owner`.
    pub fn face_normal_dot(&self, face: usize, beta: Point, owner: usize) -> Result<f64> {
        check_unit(beta)?;
        let f = self
            .faces
            .get(face)
            .ok_or_else(|| DpgError::InvalidArgument(format!("no face {face}")))?;
        let n = f
            .normal_of(owner)
            .ok_or(DpgError::NotAdjacent { face, cell: owner })?;
        Ok(dot(beta, n))
    }
}

pub(crate) fn check_unit(beta: Point) -> Result<()> {
    if (norm(beta) - 1.0).abs() > 1e-12 {
        return Err(DpgError::InvalidArgument(format!(
            "direction ({}, {}) is not a unit vector",
            beta[0], beta[1]
        )));
    }
    Ok(())
}

/// Splits the unit square into `2^level x 2^level` squares, each cut along
/// its lower-left to upper-right diagonal.
pub fn build_uniform_mesh(level: u32) -> TriMesh {
    let n = 1usize << level;
    let size = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([i as f64 * size, j as f64 * size]);
        }
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (v00, v10, v11, v01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            cells.push([v00, v10, v11]);
            cells.push([v00, v11, v01]);
        }
    }
    TriMesh::from_cells(vertices, cells, size)
}

/// Red refinement applied `levels` times. Children of one round are ordered
/// as the three corner triangles followed by the inverted middle one.
pub fn refine_cell(cell: [Point; 3], levels: u32) -> Vec<[Point; 3]> {
    let mut current = vec![cell];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(current.len() * 4);
        for [a, b, c] in current {
            let ab = geometry::midpoint(a, b);
            let bc = geometry::midpoint(b, c);
            let ca = geometry::midpoint(c, a);
            next.push([a, ab, ca]);
            next.push([ab, b, bc]);
            next.push([ca, bc, c]);
            next.push([bc, ca, ab]);
        }
        current = next;
    }
    current
}

/// Coarse mesh `Omega_H` together with its `level`-fold red refinement
/// `Omega_h`.
#[derive(Clone, Debug)]
pub struct MeshPair {
    pub coarse: TriMesh,
    pub fine: TriMesh,
    pub level: u32,
    /// Coarse cell containing each fine cell.
    pub containment: Vec<usize>,
}

impl MeshPair {
    pub fn new(coarse: TriMesh, level: u32) -> Self {
        let per_cell = 1usize << (2 * level);
        let mut vertices: Vec<Point> = Vec::new();
        let mut lookup: HashMap<(i64, i64), usize> = HashMap::new();
        let mut cells = Vec::with_capacity(coarse.num_cells() * per_cell);
        let mut containment = Vec::with_capacity(coarse.num_cells() * per_cell);
        for k in 0..coarse.num_cells() {
            for tri in refine_cell(coarse.cell_vertices(k), level) {
                let mut ids = [0usize; 3];
                for (slot, p) in ids.iter_mut().zip(tri) {
                    *slot = *lookup.entry(quantize(p)).or_insert_with(|| {
                        vertices.push(p);
                        vertices.len() - 1
                    });
                }
                cells.push(ids);
                containment.push(k);
            }
        }
        let size = coarse.size / (1u64 << level) as f64;
        let fine = TriMesh::from_cells(vertices, cells, size);
        Self {
            coarse,
            fine,
            level,
            containment,
        }
    }

    pub fn uniform(coarse_level: u32, refine_level: u32) -> Self {
        Self::new(build_uniform_mesh(coarse_level), refine_level)
    }

    pub fn fine_per_coarse(&self) -> usize {
        1usize << (2 * self.level)
    }

    /// Fine cells of coarse cell `k`, in the order produced by [`refine_cell`].
    pub fn fine_cells_of(&self, k: usize) -> std::ops::Range<usize> {
        let per = self.fine_per_coarse();
        k * per..(k + 1) * per
    }
}

/// Integer key for a coordinate pair, robust to last-bit noise.
pub(crate) fn quantize(p: Point) -> (i64, i64) {
    let scale = 1.0 / GEOM_TOL;
    ((p[0] * scale).round() as i64, (p[1] * scale).round() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn level_zero_counts() {
        let m = build_uniform_mesh(0);
        assert_eq!((m.num_cells(), m.vertices.len(), m.faces.len()), (2, 4, 5));
        assert_eq!(m.faces.iter().filter(|f| f.is_boundary()).count(), 4);
    }

    #[test]
    fn level_one_and_two_counts() {
        let m = build_uniform_mesh(1);
        assert_eq!((m.num_cells(), m.vertices.len()), (8, 9));
        let m = build_uniform_mesh(2);
        assert_eq!(m.num_cells(), 32);
        assert!((m.total_area() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cells_are_counter_clockwise() {
        for level in 0..5 {
            let m = build_uniform_mesh(level);
            assert!((0..m.num_cells()).all(|k| m.cell_area(k) > 0.0));
            assert!((m.total_area() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interior_normals_are_opposite() {
        let m = build_uniform_mesh(3);
        let beta = [(PI / 8.0).cos(), (PI / 8.0).sin()];
        for (id, f) in m.faces.iter().enumerate() {
            if let Some(nb) = f.neighbor {
                let s = m.face_normal_dot(id, beta, f.owner).unwrap()
                    + m.face_normal_dot(id, beta, nb).unwrap();
                assert!(s.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn face_normal_dot_examples() {
        let m = build_uniform_mesh(0);
        let beta = [(PI / 8.0).cos(), (PI / 8.0).sin()];
        let mut seen = (false, false, false);
        for (id, f) in m.faces.iter().enumerate() {
            let n = f.normal;
            let v = m.face_normal_dot(id, [1.0, 0.0], f.owner).unwrap();
            if (n[0] - 1.0).abs() < 1e-14 {
                assert!((v - 1.0).abs() < 1e-14);
                seen.0 = true;
            }
            if n[0].abs() < 1e-14 {
                assert!(v.abs() < 1e-14);
                seen.1 = true;
            }
            if (n[0] + 1.0).abs() < 1e-14 {
                let w = m.face_normal_dot(id, beta, f.owner).unwrap();
                assert!((w + 0.923_879_532_511_286_7).abs() < 1e-12);
                seen.2 = true;
            }
        }
        assert_eq!(seen, (true, true, true));
    }

    #[test]
    fn non_adjacent_owner_is_rejected() {
        let m = build_uniform_mesh(1);
        let f = m.faces.iter().position(|f| f.is_boundary()).unwrap();
        let stranger = (0..m.num_cells())
            .find(|&k| m.faces[f].normal_of(k).is_none())
            .unwrap();
        assert!(matches!(
            m.face_normal_dot(f, [1.0, 0.0], stranger),
            Err(DpgError::NotAdjacent { .. })
        ));
        assert!(m.face_normal_dot(f, [1.0, 1.0], m.faces[f].owner).is_err());
    }

    #[test]
    fn refine_cell_examples() {
        let reference = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        assert_eq!(refine_cell(reference, 0), vec![reference]);
        let once = refine_cell(reference, 1);
        assert_eq!(once.len(), 4);
        for t in &once {
            assert!((signed_area(t) - 0.125).abs() < 1e-15);
        }
        let twice = refine_cell(reference, 2);
        assert_eq!(twice.len(), 16);
        let total: f64 = twice.iter().map(signed_area).sum();
        assert!((total - 0.5).abs() < 1e-14);
    }

    #[test]
    fn refined_children_are_similar() {
        let parent = [[0.1, 0.2], [0.6, 0.3], [0.2, 0.9]];
        let pe = |t: &[Point; 3]| {
            let mut l = [
                norm(sub(t[1], t[0])),
                norm(sub(t[2], t[1])),
                norm(sub(t[0], t[2])),
            ];
            l.sort_by(f64::total_cmp);
            l
        };
        let p = pe(&parent);
        for child in refine_cell(parent, 2) {
            let c = pe(&child);
            for i in 0..3 {
                assert!((c[i] * 4.0 - p[i]).abs() < 1e-14);
            }
            assert!(signed_area(&child) > 0.0);
        }
    }

    #[test]
    fn mesh_pair_containment_is_a_partition() {
        for level in 0..3 {
            let pair = MeshPair::uniform(2, level);
            let per = 1usize << (2 * level);
            let mut counts = vec![0usize; pair.coarse.num_cells()];
            for &k in &pair.containment {
                counts[k] += 1;
            }
            assert!(counts.iter().all(|&c| c == per));
            assert!((pair.fine.size - pair.coarse.size / (1 << level) as f64).abs() < 1e-15);
            for k in 0..pair.coarse.num_cells() {
                let fine_area: f64 = pair.fine_cells_of(k).map(|f| pair.fine.cell_area(f)).sum();
                assert!((fine_area - pair.coarse.cell_area(k)).abs() < 1e-14);
            }
            // red refinement of a conforming mesh stays conforming
            let boundary = pair.fine.faces.iter().filter(|f| f.is_boundary()).count();
            assert_eq!(boundary, 4 * (4usize << level));
        }
    }
}
