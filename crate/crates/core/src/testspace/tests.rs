use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::DpgError;
use crate::fem::SpaceKind;
use crate::forms::{graph_inner_product, transport_bilinear_form, Space};
use crate::mesh::MeshPair;

fn m(r: usize, c: usize, v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(r, c, v)
}

fn transport() -> (BilinearForm, InnerProduct) {
    let beta = [(PI / 8.0).cos(), (PI / 8.0).sin()];
    let test = Space::new(SpaceKind::BrokenFine, 3);
    (
        transport_bilinear_form(test.clone(), beta, 0.0, 2).unwrap(),
        graph_inner_product(test, beta).unwrap(),
    )
}

#[test]
fn coefficient_examples() {
    let c = compute_coefficients(&m(1, 1, &[2.0]), &m(1, 1, &[3.0]), 0).unwrap();
    assert!((c.matrix[(0, 0)] - 1.5).abs() < 1e-15);
    let g = m(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    let c = compute_coefficients(&DMatrix::identity(2, 2), &g, 0).unwrap();
    assert_eq!(c.matrix, g);
    let c =
        compute_coefficients(&m(2, 2, &[4.0, 2.0, 2.0, 3.0]), &m(2, 1, &[2.0, 1.0]), 0).unwrap();
    assert!((c.matrix[(0, 0)] - 0.5).abs() < 1e-15 && c.matrix[(1, 0)].abs() < 1e-15);
}

#[test]
fn indefinite_gram_names_the_cell() {
    let err = compute_coefficients(&m(2, 2, &[1.0, 2.0, 2.0, 1.0]), &m(2, 1, &[1.0, 1.0]), 17)
        .unwrap_err();
    match err {
        DpgError::LocalGram { cell, source } => {
            assert_eq!(cell, 17);
            assert!(matches!(*source, DpgError::NotPositiveDefinite { .. }));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn local_matrix_examples() {
    let c = TestCoefficients {
        matrix: m(1, 1, &[1.0]),
    };
    assert_eq!(near_optimal_local_matrix(&m(1, 1, &[2.0]), &c)[(0, 0)], 2.0);
    let c =
        compute_coefficients(&m(2, 2, &[2.0, 0.0, 0.0, 1.0]), &DMatrix::zeros(2, 3), 0).unwrap();
    assert_eq!(
        near_optimal_local_matrix(&DMatrix::zeros(2, 3), &c),
        DMatrix::zeros(3, 3)
    );
}

#[test]
fn local_matrix_matches_lu_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let g = DMatrix::from_fn(4, 3, |_, _| rng.gen_range(-1.0..1.0));
    let r = DMatrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
    let b = r.transpose() * &r + DMatrix::identity(4, 4) * 4.0;
    let c = compute_coefficients(&b, &g, 0).unwrap();
    let a = near_optimal_local_matrix(&g, &c);
    let oracle = g.transpose() * b.clone().lu().solve(&g).unwrap();
    assert!((a - oracle).amax() < 1e-12);
}

#[test]
fn load_examples() {
    let c = TestCoefficients {
        matrix: m(1, 1, &[1.5]),
    };
    assert_eq!(
        near_optimal_load(&c, &DVector::from_vec(vec![0.5]))[0],
        0.75
    );
    assert_eq!(near_optimal_load(&c, &DVector::zeros(1))[0], 0.0);
    let id = TestCoefficients {
        matrix: DMatrix::identity(3, 3),
    };
    let l = DVector::from_vec(vec![1.0, 2.0, 3.0]);
    assert_eq!(near_optimal_load(&id, &l), l);
}

#[test]
fn defining_relation_and_energy_identity() {
    for level in 0..=2 {
        let (form, inner) = transport();
        let pair = MeshPair::uniform(1, level);
        for k in 0..2 {
            let cell = LocalCell::from_pair(&pair, k).unwrap();
            let s = LocalSolve::compute(&form, &inner, &cell, k).unwrap();
            let residual = &s.gram * &s.coefficients.matrix - &s.form;
            assert!(residual.amax() <= 1e-10 * s.form.amax());
            assert!((&s.stiffness - s.stiffness.transpose()).amax() <= 1e-11);
            for i in 0..s.stiffness.ncols() {
                let ci = s.coefficients.matrix.column(i);
                let energy = (ci.transpose() * &s.gram * ci)[(0, 0)];
                assert!((s.stiffness[(i, i)] - energy).abs() <= 1e-10 * energy.abs().max(1e-3));
            }
            let eig = s.stiffness.clone().symmetric_eigen().eigenvalues;
            assert!(eig.min() >= -1e-10);
        }
    }
}

#[test]
fn translated_copies_hit_the_cache() {
    let (form, inner) = transport();
    let cache = KeyedCache::new();
    let space = NearOptimalTestSpace::new(&form, &inner, &cache);
    let a = LocalCell::new([[0.0, 0.0], [0.25, 0.0], [0.25, 0.25]], 1).unwrap();
    let b = LocalCell::new([[0.5, 0.25], [0.75, 0.25], [0.75, 0.5]], 1).unwrap();
    let ca = space.coefficients_for_cell(&a, 0).unwrap();
    let cb = space.coefficients_for_cell(&b, 1).unwrap();
    assert_eq!(ca, cb);
    assert_eq!(cache.stats(), CacheStats { hits: 1, misses: 1 });
    // uncached computation on the translated cell is bit-identical
    let fresh = LocalSolve::compute(&form, &inner, &b, 1).unwrap();
    assert_eq!(fresh.coefficients, cb);
}

#[test]
fn reflected_cell_misses() {
    let (form, inner) = transport();
    let cache = KeyedCache::new();
    let space = NearOptimalTestSpace::new(&form, &inner, &cache);
    let a = LocalCell::new([[0.0, 0.0], [0.25, 0.0], [0.25, 0.25]], 0).unwrap();
    let mirrored = LocalCell::new([[0.0, 0.0], [0.0, 0.25], [-0.25, 0.25]], 0).unwrap();
    space.local_solve(&a, 0).unwrap();
    space.local_solve(&mirrored, 1).unwrap();
    assert_eq!(cache.stats().misses, 2);
    assert_eq!(cache.len(), 2);
}

#[test]
fn uniform_mesh_has_two_geometry_classes() {
    for level in 0..5 {
        let pair = MeshPair::uniform(level, 0);
        let keys: std::collections::HashSet<_> = (0..pair.coarse.num_cells())
            .map(|k| GeometryKey::of(&LocalCell::from_pair(&pair, k).unwrap()))
            .collect();
        assert_eq!(keys.len(), 2);
    }
}

#[test]
fn cache_policies_from_registry() {
    let reg = cache_registry();
    assert_eq!(
        reg.names().collect::<Vec<_>>(),
        ["keyed", "last-cell", "off"]
    );
    let (form, inner) = transport();
    let pair = MeshPair::uniform(2, 0);
    let cells: Vec<_> = (0..pair.coarse.num_cells())
        .map(|k| LocalCell::from_pair(&pair, k).unwrap())
        .collect();
    let n = cells.len();
    let mut results = Vec::new();
    for name in ["keyed", "last-cell", "off"] {
        let cache = reg.create(name).unwrap();
        assert_eq!(cache.name(), name);
        let space = NearOptimalTestSpace::new(&form, &inner, cache.as_ref());
        let all: Vec<_> = cells
            .iter()
            .enumerate()
            .map(|(k, c)| space.coefficients_for_cell(c, k).unwrap())
            .collect();
        let stats = cache.stats();
        assert_eq!(stats.lookups(), n);
        match name {
            "keyed" => assert_eq!(stats.misses, 2),
            // alternating lower/upper triangles defeat a last-cell cache
            "last-cell" => assert_eq!(stats.misses, n),
            _ => assert_eq!(stats.hits, 0),
        }
        results.push(all);
    }
    assert_eq!(results[0], results[1]);
    assert_eq!(results[0], results[2]);
}
