use super::{BilinearForm, InnerProduct, IntegralTerm, IntegrationType, Space};
use crate::error::{DpgError, Result};
use crate::fem::SpaceKind;
use crate::geometry::Point;

/// Ultra-weak transport form on trial spaces `[phi, theta]`:
///
/// `b((phi, theta), v) = int c v phi - int (beta . grad v) phi
///                      + sum_{fine K_h} int_{dK_h} v theta (beta . n)`.
///
/// `phi` is broken of degree `m - 1` on the coarse cells, `theta` continuous
/// of degree `m`.
pub fn transport_bilinear_form(
    test: Space,
    beta: Point,
    reaction: f64,
    m: usize,
) -> Result<BilinearForm> {
    if m == 0 {
        return Err(DpgError::InvalidArgument(
            "trial parameter m must be >= 1".into(),
        ));
    }
    let trial = vec![
        Space::new(SpaceKind::BrokenCoarse, m - 1),
        Space::new(SpaceKind::ContinuousCoarse, m),
    ];
    let mut terms = Vec::with_capacity(3);
    if reaction != 0.0 {
        terms.push(IntegralTerm::value_value(0, 0, reaction));
    }
    terms.push(IntegralTerm::interior(
        0,
        0,
        IntegrationType::GradValue,
        -1.0,
        beta,
    )?);
    terms.push(IntegralTerm::face(
        0,
        1,
        IntegrationType::NormalVector,
        1.0,
        beta,
    )?);
    BilinearForm::new(vec![test], trial, terms)
}

/// Broken graph-norm product `int v w + (beta . grad v)(beta . grad w)`.
pub fn graph_inner_product(test: Space, beta: Point) -> Result<InnerProduct> {
    InnerProduct::new(
        vec![test],
        vec![
            IntegralTerm::value_value(0, 0, 1.0),
            IntegralTerm::interior(0, 0, IntegrationType::GradGrad, 1.0, beta)?,
        ],
    )
}
