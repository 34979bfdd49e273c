use nalgebra::DMatrix;

use super::{coupling_profile, scatter, PenaltyConfig};
use crate::linalg::SymMatrix;
use crate::mesh::Point;
use crate::space::{FeSpace, Tab, Tabulation};

/// Which parts of the IPDG form to assemble.
///
/// The full form uses all four; the DG-norm Gram matrix drops
/// `consistency`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormTerms {
    pub hessian: bool,
    pub consistency: bool,
    pub value_penalty: bool,
    pub gradient_penalty: bool,
}

impl FormTerms {
    pub const FULL: FormTerms = FormTerms {
        hessian: true,
        consistency: true,
        value_penalty: true,
        gradient_penalty: true,
    };
    pub const NORM: FormTerms = FormTerms {
        consistency: false,
        ..FormTerms::FULL
    };
    pub const CONSISTENCY_ONLY: FormTerms = FormTerms {
        hessian: false,
        consistency: true,
        value_penalty: false,
        gradient_penalty: false,
    };
}

/// IPDG matrix `A[i][j] = B(φ_j, φ_i)`.
pub fn assemble_ipdg<S: FeSpace>(space: &S, penalty: &PenaltyConfig) -> SymMatrix {
    assemble_form(space, penalty, FormTerms::FULL)
}

/// Gram matrix of the DG norm
/// `‖D²v‖² + Σ_F τ‖⟦∇v⟧‖² + Σ_F σ‖⟦v⟧‖²`.
pub fn assemble_dg_norm<S: FeSpace>(space: &S, penalty: &PenaltyConfig) -> SymMatrix {
    assemble_form(space, penalty, FormTerms::NORM)
}

pub fn assemble_form<S: FeSpace>(space: &S, penalty: &PenaltyConfig, terms: FormTerms) -> SymMatrix {
    let mut a = SymMatrix::with_profile(coupling_profile(space));
    let core = space.core();
    if terms.hessian {
        for e in 0..core.mesh.num_elements() {
            let (tab, _, wts) = core.volume_tabulation(e);
            scatter(&mut a, &space.element_dofs(e), &hessian_stiffness(&tab, &wts));
        }
    }
    let p = core.p;
    for f in 0..core.mesh.faces.len() {
        let tr = FaceTrace::new(space, f);
        let h = core.mesh.faces[f].length;
        let n = tr.normal;
        let mut blocks = Vec::new();
        if terms.value_penalty || terms.consistency {
            let cons = terms
                .consistency
                .then(|| tr.average(|t| n[0] * (t[6] + t[8]) + n[1] * (t[7] + t[9])));
            let pen = if terms.value_penalty { penalty.sigma(p, h) } else { 0.0 };
            blocks.push((tr.jump(|t| t[0]), cons, pen));
        }
        if terms.gradient_penalty || terms.consistency {
            let pen = if terms.gradient_penalty { penalty.tau(p, h) } else { 0.0 };
            let cx = terms.consistency.then(|| tr.average(|t| -(t[3] * n[0] + t[4] * n[1])));
            let cy = terms.consistency.then(|| tr.average(|t| -(t[4] * n[0] + t[5] * n[1])));
            blocks.push((tr.jump(|t| t[1]), cx, pen));
            blocks.push((tr.jump(|t| t[2]), cy, pen));
        }
        scatter(&mut a, &tr.dofs, &face_matrix(&tr.weights, &blocks));
    }
    a
}

/// `∫ D²φ_i : D²φ_j` from a physical tabulation.
pub(crate) fn hessian_stiffness(tab: &Tabulation, wts: &[f64]) -> DMatrix<f64> {
    let (nq, nb) = (tab.npts, tab.nb);
    let mut d = DMatrix::zeros(3 * nq, nb);
    let mut dw = DMatrix::zeros(3 * nq, nb);
    let r2 = std::f64::consts::SQRT_2;
    for q in 0..nq {
        for (k, t) in tab.at(q).iter().enumerate() {
            let vals = [t[3], r2 * t[4], t[5]];
            for (c, v) in vals.iter().enumerate() {
                d[(c * nq + q, k)] = *v;
                dw[(c * nq + q, k)] = v * wts[q];
            }
        }
    }
    dw.tr_mul(&d)
}

/// `(K_b, C_b, pen_b)`; a missing `C_b` drops the consistency term.
pub(crate) type FaceBlock = (DMatrix<f64>, Option<DMatrix<f64>>, f64);

/// Face contribution `Σ_b [K_bᵀ W C_b + C_bᵀ W K_b + pen_b K_bᵀ W K_b]`
/// from blocks `(K_b, C_b, pen_b)` of rows evaluated at face points.
pub(crate) fn face_matrix(weights: &[f64], blocks: &[FaceBlock]) -> DMatrix<f64> {
    let ncols = blocks[0].0.ncols();
    let mut m = DMatrix::zeros(ncols, ncols);
    for (k, c, pen) in blocks {
        let mut kw = k.clone();
        for (q, w) in weights.iter().enumerate() {
            kw.row_mut(q).scale_mut(*w);
        }
        if let Some(c) = c {
            let x = kw.tr_mul(c);
            m += &x + x.transpose();
        }
        if *pen != 0.0 {
            m += kw.tr_mul(k) * *pen;
        }
    }
    m
}

/// Basis traces of the one or two elements adjacent to a face, on the
/// face's default Gauss rule.
pub(crate) struct FaceTrace {
    pub dofs: Vec<usize>,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub normal: Point,
    pub sides: Vec<Tabulation>,
}

impl FaceTrace {
    pub fn new<S: FeSpace + ?Sized>(space: &S, f: usize) -> Self {
        let core = space.core();
        let (points, weights) = core.face_rule(f);
        Self::with_points(space, f, points, weights)
    }

    pub fn with_points<S: FeSpace + ?Sized>(space: &S, f: usize, points: Vec<Point>, weights: Vec<f64>) -> Self {
        let core = space.core();
        let face = &core.mesh.faces[f];
        let elems: Vec<usize> = std::iter::once(face.plus).chain(face.minus).collect();
        let mut dofs = Vec::new();
        let sides = elems
            .iter()
            .map(|&e| {
                dofs.extend(space.element_dofs(e));
                core.eval_basis_physical(e, &points)
            })
            .collect();
        Self {
            dofs,
            points,
            weights,
            normal: face.normal,
            sides,
        }
    }

    fn rows(&self, factors: &[f64], g: impl Fn(&Tab) -> f64) -> DMatrix<f64> {
        let nq = self.points.len();
        let nb = self.sides[0].nb;
        let mut m = DMatrix::zeros(nq, nb * self.sides.len());
        for (s, (tab, fac)) in self.sides.iter().zip(factors).enumerate() {
            for q in 0..nq {
                for (k, t) in tab.at(q).iter().enumerate() {
                    m[(q, s * nb + k)] = fac * g(t);
                }
            }
        }
        m
    }

    /// Rows of `⟦g(φ)⟧`: plus minus minus, or the trace on the boundary.
    pub fn jump(&self, g: impl Fn(&Tab) -> f64) -> DMatrix<f64> {
        self.rows(&[1.0, -1.0], g)
    }

    /// Rows of `{g(φ)}`: the mean, or the trace on the boundary.
    pub fn average(&self, g: impl Fn(&Tab) -> f64) -> DMatrix<f64> {
        if self.sides.len() == 2 {
            self.rows(&[0.5, 0.5], g)
        } else {
            self.rows(&[1.0], g)
        }
    }
}
