//! Solutions lying in the trial space are reproduced at every test-search
//! refinement level.

use std::f64::consts::PI;

use dpg_core::assembly::{
    apply_dirichlet, assemble, inflow_mask, pin_characteristic_dofs, SolutionLayout,
};
use dpg_core::estimator::l2_error;
use dpg_core::fem::SpaceKind;
use dpg_core::forms::{graph_inner_product, transport_bilinear_form, Space};
use dpg_core::geometry::Point;
use dpg_core::mesh::MeshPair;
use dpg_core::solve::cg_solve;
use dpg_core::testspace::KeyedCache;

fn solve_error(
    beta: Point,
    m: usize,
    level: u32,
    refine: u32,
    f: &dyn Fn(Point) -> f64,
    exact: &dyn Fn(Point) -> f64,
) -> f64 {
    let pair = MeshPair::uniform(level, refine);
    let test = Space::new(SpaceKind::BrokenFine, m + 1);
    let form = transport_bilinear_form(test.clone(), beta, 0.0, m).unwrap();
    let inner = graph_inner_product(test, beta).unwrap();
    let layout = SolutionLayout::transport(&pair, m).unwrap();
    let mut sys = assemble(&form, &inner, &pair, &layout, f, &KeyedCache::new()).unwrap();
    let mask = inflow_mask(layout.map(1), &pair.coarse, beta).unwrap();
    apply_dirichlet(&mut sys, &mask, 1, 0.0).unwrap();
    pin_characteristic_dofs(&mut sys, layout.map(1), 1, &pair, beta).unwrap();
    let (x, r) = cg_solve(&sys.matrix, &sys.rhs, 1e-13, 100_000).unwrap();
    assert!(r.converged);
    l2_error(layout.map(0), layout.block(&x, 0), exact, &pair.coarse).unwrap()
}

#[test]
fn bilinear_solution_for_oblique_flow() {
    let beta = [(PI / 8.0).cos(), (PI / 8.0).sin()];
    // phi = x y vanishes on both inflow sides; beta . grad phi = b1 y + b2 x.
    let f = move |p: Point| beta[0] * p[1] + beta[1] * p[0];
    let exact = |p: Point| p[0] * p[1];
    for refine in 0..=2 {
        for level in 0..=2 {
            let e = solve_error(beta, 3, level, refine, &f, &exact);
            assert!(e <= 1e-10, "level {level}, refine {refine}: {e:e}");
        }
    }
}

#[test]
fn linear_solution_for_horizontal_flow() {
    let exact = |p: Point| p[0];
    for refine in 0..=2 {
        for level in 1..=3 {
            let e = solve_error([1.0, 0.0], 2, level, refine, &|_| 1.0, &exact);
            assert!(e <= 1e-10, "level {level}, refine {refine}: {e:e}");
        }
    }
}
