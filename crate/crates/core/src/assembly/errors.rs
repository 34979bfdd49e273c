use super::load::{element_rule, face_points, LoadOptions, CHUNK};
use super::PenaltyConfig;
use crate::solutions::ManufacturedCase;
use crate::space::{FeSpace, Tab};

/// Which discrete norm the jump terms follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormKind {
    /// Value and full-gradient jumps, as in the IPDG norm.
    #[default]
    Ipdg,
    /// Normal-gradient jumps only.
    C0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorOptions {
    pub quadrature: LoadOptions,
    pub norm: NormKind,
}

impl Default for ErrorOptions {
    fn default() -> Self {
        Self {
            quadrature: LoadOptions::default(),
            norm: NormKind::Ipdg,
        }
    }
}

/// Errors of a discrete solution against the exact one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorReport {
    /// Full DG-norm error, boundary faces included.
    pub dg_error: f64,
    /// DG-norm error with jumps on interior faces only.
    pub dg_error_interior: f64,
    pub l2_error: f64,
    /// Broken `H¹` norm of the error.
    pub h1_error: f64,
    pub hessian_error: f64,
    pub grad_jump_error: f64,
    pub value_jump_error: f64,
}

/// Errors of the coefficient vector `coeffs` measured against `case`.
///
/// Elements and faces touching a singular point use graded quadrature.
pub fn compute_errors<S: FeSpace>(
    space: &S,
    coeffs: &[f64],
    case: &ManufacturedCase,
    penalty: &PenaltyConfig,
    opts: &ErrorOptions,
) -> ErrorReport {
    let core = space.core();
    let (mut hess, mut l2, mut h1) = (0.0, 0.0, 0.0);
    for e in 0..core.mesh.num_elements() {
        let rule = element_rule(core, e, &case.singular_points, &opts.quadrature);
        let map = &core.maps[e];
        let local = space.local_coeffs(e, coeffs);
        for (points, weights) in rule.points.chunks(CHUNK).zip(rule.weights.chunks(CHUNK)) {
            let uh = core.eval_basis(e, points).field_tabs(&local);
            for (q, xi) in points.iter().enumerate() {
                let err = error_tab(case, map.to_physical(*xi), &uh[q]);
                let w = weights[q] * map.det;
                l2 += w * err[0] * err[0];
                h1 += w * (err[1] * err[1] + err[2] * err[2]);
                hess += w * (err[3] * err[3] + 2.0 * err[4] * err[4] + err[5] * err[5]);
            }
        }
    }
    let p = core.p;
    let (mut gj, mut vj, mut gj_int, mut vj_int) = (0.0, 0.0, 0.0, 0.0);
    for (f, face) in core.mesh.faces.iter().enumerate() {
        let (pts, wts) = face_points(core, f, &case.singular_points, &opts.quadrature);
        let side = |e: usize| {
            let uh = core
                .eval_basis_physical(e, &pts)
                .field_tabs(&space.local_coeffs(e, coeffs));
            pts.iter()
                .zip(&uh)
                .map(|(x, t)| error_tab(case, *x, t))
                .collect::<Vec<_>>()
        };
        let plus = side(face.plus);
        let minus = face.minus.map(side);
        let n = face.normal;
        let (mut g, mut v) = (0.0, 0.0);
        for q in 0..pts.len() {
            let mut jump = [plus[q][0], plus[q][1], plus[q][2]];
            if let Some(m) = &minus {
                for (j, c) in jump.iter_mut().zip(&m[q]) {
                    *j -= c;
                }
            }
            match opts.norm {
                NormKind::Ipdg => {
                    g += wts[q] * (jump[1] * jump[1] + jump[2] * jump[2]);
                    v += wts[q] * jump[0] * jump[0];
                }
                NormKind::C0 => {
                    let jn = n[0] * jump[1] + n[1] * jump[2];
                    g += wts[q] * jn * jn;
                }
            }
        }
        let tau = penalty.tau(p, face.length);
        let sigma = if opts.norm == NormKind::Ipdg {
            penalty.sigma(p, face.length)
        } else {
            0.0
        };
        gj += tau * g;
        vj += sigma * v;
        if minus.is_some() {
            gj_int += tau * g;
            vj_int += sigma * v;
        }
    }
    ErrorReport {
        dg_error: (hess + gj + vj).sqrt(),
        dg_error_interior: (hess + gj_int + vj_int).sqrt(),
        l2_error: l2.sqrt(),
        h1_error: (l2 + h1).sqrt(),
        hessian_error: hess.sqrt(),
        grad_jump_error: gj.sqrt(),
        value_jump_error: vj.sqrt(),
    }
}

/// `u − u_h` through second derivatives.
fn error_tab(case: &ManufacturedCase, x: [f64; 2], uh: &Tab) -> [f64; 6] {
    let d = case.derivs(x[0], x[1]);
    std::array::from_fn(|i| d[i] - uh[i])
}
