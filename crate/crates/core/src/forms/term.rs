use nalgebra::DMatrix;

use super::{LocalCell, Space};
use crate::error::{DpgError, Result};
use crate::fem::{make_quadrature, MAX_EXACTNESS};
use crate::geometry::{dot, norm, outward_normal, sub, Point};

/// `|beta . n|` at or below this counts as zero for `normalSign`.
pub const SIGN_TOL: f64 = 1e-10;

/// Which factors enter the integrand. `d` denotes the directional
/// derivative `beta . grad`; the first word refers to the test side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntegrationType {
    /// `c v u`
    ValueValue,
    /// `c (d v) u`
    GradValue,
    /// `c v (d u)`
    ValueGrad,
    /// `c (d v) (d u)`
    GradGrad,
    /// `c v u (beta . n)` on fine-cell boundaries
    NormalVector,
    /// `c v u sign(beta . n)` on fine-cell boundaries
    NormalSign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Interior,
    Face,
}

/// One elementary integral: test space `test` against trial space `trial`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralTerm {
    pub test: usize,
    pub trial: usize,
    pub kind: IntegrationType,
    pub domain: Domain,
    pub coefficient: f64,
    pub beta: Option<Point>,
}

impl IntegralTerm {
    pub fn new(
        test: usize,
        trial: usize,
        kind: IntegrationType,
        domain: Domain,
        coefficient: f64,
        beta: Option<Point>,
    ) -> Result<Self> {
        use IntegrationType::*;
        let face_kind = matches!(kind, NormalVector | NormalSign);
        match (domain, face_kind) {
            (Domain::Interior, true) => {
                return Err(DpgError::InvalidTerm(format!(
                    "{kind:?} needs the face domain"
                )))
            }
            (Domain::Face, false) => {
                return Err(DpgError::InvalidTerm(format!(
                    "{kind:?} needs the interior domain"
                )))
            }
            _ => {}
        }
        let beta = match (kind, beta) {
            (ValueValue, _) => None,
            (_, None) => return Err(DpgError::InvalidTerm(format!("{kind:?} needs a direction"))),
            (_, Some(b)) => {
                if (norm(b) - 1.0).abs() > 1e-12 {
                    return Err(DpgError::InvalidTerm(format!(
                        "direction ({}, {}) is not a unit vector",
                        b[0], b[1]
                    )));
                }
                Some(b)
            }
        };
        if !coefficient.is_finite() {
            return Err(DpgError::InvalidTerm("coefficient is not finite".into()));
        }
        Ok(Self {
            test,
            trial,
            kind,
            domain,
            coefficient,
            beta,
        })
    }

    pub fn value_value(test: usize, trial: usize, c: f64) -> Self {
        Self::new(
            test,
            trial,
            IntegrationType::ValueValue,
            Domain::Interior,
            c,
            None,
        )
        .expect("valid valueValue term")
    }

    pub fn interior(
        test: usize,
        trial: usize,
        kind: IntegrationType,
        c: f64,
        beta: Point,
    ) -> Result<Self> {
        Self::new(test, trial, kind, Domain::Interior, c, Some(beta))
    }

    pub fn face(
        test: usize,
        trial: usize,
        kind: IntegrationType,
        c: f64,
        beta: Point,
    ) -> Result<Self> {
        Self::new(test, trial, kind, Domain::Face, c, Some(beta))
    }

    fn quadrature_degree(&self, test: &Space, trial: &Space) -> usize {
        let base = test.degree() + trial.degree();
        let d = match self.domain {
            Domain::Interior => base + 2,
            Domain::Face => base + 1,
        };
        d.min(MAX_EXACTNESS)
    }
}

/// Contribution of `term` on `cell`: entry `(j, i)` is the integral with test
/// function `j` and trial function `i`.
pub fn term_local_matrix(
    term: &IntegralTerm,
    cell: &LocalCell,
    test: &Space,
    trial: &Space,
) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(test.local_dim(cell), trial.local_dim(cell));
    let rule =
        make_quadrature(term.quadrature_degree(test, trial)).expect("degree clamped to table");
    let beta = term.beta.unwrap_or([0.0, 0.0]);
    let (nt, nu) = (test.basis().size(), trial.basis().size());
    let mut tv = vec![0.0; nt];
    let mut tg = vec![[0.0; 2]; nt];
    let mut uv = vec![0.0; nu];
    let mut ug = vec![[0.0; 2]; nu];

    use IntegrationType::*;
    let derive_test = matches!(term.kind, GradValue | GradGrad);
    let derive_trial = matches!(term.kind, ValueGrad | GradGrad);
    let mut accumulate = |weight: f64, fi: usize, x: Point| {
        let ot = test.eval_at(cell, fi, x, &mut tv, &mut tg);
        let ou = trial.eval_at(cell, fi, x, &mut uv, &mut ug);
        if derive_test {
            for (v, g) in tv.iter_mut().zip(&tg) {
                *v = dot(beta, *g);
            }
        }
        if derive_trial {
            for (v, g) in uv.iter_mut().zip(&ug) {
                *v = dot(beta, *g);
            }
        }
        for (j, &a) in tv.iter().enumerate() {
            let wa = weight * a;
            if wa == 0.0 {
                continue;
            }
            for (i, &b) in uv.iter().enumerate() {
                m[(ot + j, ou + i)] += wa * b;
            }
        }
    };

    match term.domain {
        Domain::Interior => {
            for (fi, fmap) in cell.fine.iter().enumerate() {
                let scale = term.coefficient * fmap.det.abs();
                for (xi, w) in rule.iter() {
                    accumulate(w * scale, fi, fmap.to_physical(xi));
                }
            }
        }
        Domain::Face => {
            for (fi, fmap) in cell.fine.iter().enumerate() {
                let corners = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]].map(|p| fmap.to_physical(p));
                for e in 0..3 {
                    let (a, b) = (corners[e], corners[(e + 1) % 3]);
                    let bn = dot(beta, outward_normal(a, b));
                    let factor = match term.kind {
                        NormalSign if bn.abs() <= SIGN_TOL => 0.0,
                        NormalSign => bn.signum(),
                        _ => bn,
                    };
                    let scale = term.coefficient * factor * norm(sub(b, a));
                    if scale == 0.0 {
                        continue;
                    }
                    for (t, w) in rule.edge_iter() {
                        let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                        accumulate(w * scale, fi, x);
                    }
                }
            }
        }
    }
    m
}
