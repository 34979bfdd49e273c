use super::c0ipdg::normal_hessian;
use super::graded::{graded_interval, graded_square, graded_triangle, singular_parameter, RefRule, DEFAULT_LEVELS};
use super::{BoundaryData, PenaltyConfig};
use crate::mesh::Point;
use crate::polylib::gauss_legendre_rule;
use crate::solutions::{LoadMode, ManufacturedCase};
use crate::space::{C0Space, FeSpace, SpaceCore};

/// Points tabulated at once on heavily graded rules.
pub(crate) const CHUNK: usize = 1024;

/// Quadrature settings for loads and error norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    /// Dyadic levels toward singular points.
    pub grading_levels: usize,
    /// Points per direction beyond `p + 2` on cells away from singular points.
    pub extra_points: usize,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            grading_levels: DEFAULT_LEVELS,
            extra_points: 8,
        }
    }
}

/// IPDG load: `(f, φ_i)` plus the Nitsche boundary terms
/// `∫_{∂Ω} (n·∇Δφ_i) g_D − (D²φ_i n)·G + σ g_D φ_i + τ G·∇φ_i`,
/// where `G` is the boundary gradient built from `g_N` and `∂_t g_D`.
pub fn assemble_load<S: FeSpace>(
    space: &S,
    case: &ManufacturedCase,
    bc: &BoundaryData,
    penalty: &PenaltyConfig,
    opts: &LoadOptions,
) -> Vec<f64> {
    let mut b = volume_load(space, case, opts);
    let core = space.core();
    let p = core.p;
    for (f, face) in core.mesh.boundary_faces() {
        let (pts, wts) = face_points(core, f, &case.singular_points, opts);
        let tab = core.eval_basis_physical(face.plus, &pts);
        let n = face.normal;
        let (sigma, tau) = (penalty.sigma(p, face.length), penalty.tau(p, face.length));
        let dofs = space.element_dofs(face.plus);
        for q in 0..pts.len() {
            let gd = bc.g_d(pts[q]);
            let g = bc.gradient(pts[q], n);
            for (k, t) in tab.at(q).iter().enumerate() {
                let cons = (n[0] * (t[6] + t[8]) + n[1] * (t[7] + t[9])) * gd
                    - (t[3] * n[0] + t[4] * n[1]) * g[0]
                    - (t[4] * n[0] + t[5] * n[1]) * g[1];
                let pen = sigma * gd * t[0] + tau * (g[0] * t[1] + g[1] * t[2]);
                b[dofs[k]] += wts[q] * (cons + pen);
            }
        }
    }
    b
}

/// C⁰-IPDG load: `(f, φ_i)` plus `∫_{∂Ω} −(n·D²φ_i n) g_N + τ g_N (n·∇φ_i)`.
/// Dirichlet values enter through the strongly imposed boundary unknowns.
pub fn assemble_c0_load(
    space: &C0Space,
    case: &ManufacturedCase,
    bc: &BoundaryData,
    penalty: &PenaltyConfig,
    opts: &LoadOptions,
) -> Vec<f64> {
    let mut b = volume_load(space, case, opts);
    let core = space.core();
    for (f, face) in core.mesh.boundary_faces() {
        let (pts, wts) = face_points(core, f, &case.singular_points, opts);
        let tab = core.eval_basis_physical(face.plus, &pts);
        let n = face.normal;
        let tau = penalty.tau(core.p, face.length);
        let dofs = space.element_dofs(face.plus);
        for q in 0..pts.len() {
            let gn = bc.g_n(pts[q], n);
            for (k, t) in tab.at(q).iter().enumerate() {
                let v = -normal_hessian(t, n) * gn + tau * gn * (n[0] * t[1] + n[1] * t[2]);
                b[dofs[k]] += wts[q] * v;
            }
        }
    }
    b
}

/// `(f, φ_i)` in the mode selected by the case.
fn volume_load<S: FeSpace>(space: &S, case: &ManufacturedCase, opts: &LoadOptions) -> Vec<f64> {
    let core = space.core();
    let mut b = vec![0.0; space.ndofs()];
    if case.biharmonic_free && case.load_mode == LoadMode::Direct {
        return b;
    }
    for e in 0..core.mesh.num_elements() {
        let dofs = space.element_dofs(e);
        let rule = element_rule(core, e, &case.singular_points, opts);
        let map = &core.maps[e];
        for (points, weights) in rule.points.chunks(CHUNK).zip(rule.weights.chunks(CHUNK)) {
            let tab = core.eval_basis(e, points);
            for (q, xi) in points.iter().enumerate() {
                let x = map.to_physical(*xi);
                let w = weights[q] * map.det;
                match case.load_mode {
                    LoadMode::Direct => {
                        let f = case.rhs(x[0], x[1]);
                        for (k, t) in tab.at(q).iter().enumerate() {
                            b[dofs[k]] += w * f * t[0];
                        }
                    }
                    LoadMode::IntegrationByParts => {
                        let h = case.hessian(x[0], x[1]);
                        for (k, t) in tab.at(q).iter().enumerate() {
                            b[dofs[k]] += w * (h[0] * t[3] + 2.0 * h[1] * t[4] + h[2] * t[5]);
                        }
                    }
                }
            }
        }
        if case.load_mode != LoadMode::IntegrationByParts {
            continue;
        }
        // Boundary of K: + ∫ (n_K·∇Δu) φ − ∫ (D²u n_K)·∇φ.
        let verts = core.mesh.element_vertices(e);
        for i in 0..verts.len() {
            let (a, c) = (verts[i], verts[(i + 1) % verts.len()]);
            let len = (c[0] - a[0]).hypot(c[1] - a[1]);
            let n = [(c[1] - a[1]) / len, -(c[0] - a[0]) / len];
            let (pts, wts) = segment_points(a, c, &case.singular_points, core.p, opts);
            let tab = core.eval_basis_physical(e, &pts);
            for (q, x) in pts.iter().enumerate() {
                let d = case.derivs(x[0], x[1]);
                let grad_lap = [d[6] + d[8], d[7] + d[9]];
                let flux = n[0] * grad_lap[0] + n[1] * grad_lap[1];
                let hn = [d[3] * n[0] + d[4] * n[1], d[4] * n[0] + d[5] * n[1]];
                for (k, t) in tab.at(q).iter().enumerate() {
                    b[dofs[k]] += wts[q] * (flux * t[0] - hn[0] * t[1] - hn[1] * t[2]);
                }
            }
        }
    }
    b
}

/// Reference rule on element `e`, graded toward any singular point in its
/// closure and plain Gauss with `p + 2 + extra` points otherwise.
pub(crate) fn element_rule(core: &SpaceCore, e: usize, singular: &[Point], opts: &LoadOptions) -> RefRule {
    let map = &core.maps[e];
    let quad = core.basis.is_quad();
    for s in singular {
        let xi = map.to_reference(*s);
        let tol = 1e-12;
        let inside = if quad {
            xi.iter().all(|v| v.abs() <= 1.0 + tol)
        } else {
            xi[0] >= -tol && xi[1] >= -tol && xi[0] + xi[1] <= 1.0 + tol
        };
        if inside {
            let n = core.p + 2;
            return if quad {
                graded_square(xi, opts.grading_levels, n)
            } else {
                graded_triangle(xi, opts.grading_levels, n)
            };
        }
    }
    let (points, weights) = core.basis.volume_rule(core.p + 2 + opts.extra_points);
    RefRule { points, weights }
}

/// Physical points and weights on the segment `a → b`.
pub(crate) fn segment_points(
    a: Point,
    b: Point,
    singular: &[Point],
    p: usize,
    opts: &LoadOptions,
) -> (Vec<Point>, Vec<f64>) {
    let (nodes, weights) = match singular_parameter(a, b, singular) {
        Some(s) => graded_interval(Some(s), opts.grading_levels, p + 2),
        None => {
            let g = gauss_legendre_rule(p + 2 + opts.extra_points).expect("positive order");
            (g.nodes, g.weights)
        }
    };
    let len = (b[0] - a[0]).hypot(b[1] - a[1]);
    let pts = nodes
        .iter()
        .map(|t| {
            let s = 0.5 * (1.0 + t);
            [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
        })
        .collect();
    (pts, weights.iter().map(|w| 0.5 * w * len).collect())
}

pub(crate) fn face_points(
    core: &SpaceCore,
    f: usize,
    singular: &[Point],
    opts: &LoadOptions,
) -> (Vec<Point>, Vec<f64>) {
    let face = &core.mesh.faces[f];
    let a = core.mesh.vertices[face.vertices[0]];
    let b = core.mesh.vertices[face.vertices[1]];
    segment_points(a, b, singular, core.p, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assemble_ipdg;
    use crate::mesh::cartesian_mesh;
    use crate::solutions::make_case;
    use crate::space::build_dg_space;

    #[test]
    fn zero_data_gives_zero_load() {
        let mesh = cartesian_mesh(2, 2, [-1.0, 1.0, -1.0, 1.0]).unwrap();
        let s = build_dg_space(&mesh, 3).unwrap();
        let zero = ManufacturedCase::custom("zero", |_, _| [0.0; 15], LoadMode::Direct);
        let b = assemble_load(
            &s,
            &zero,
            &BoundaryData::zero(),
            &PenaltyConfig::default(),
            &LoadOptions::default(),
        );
        assert!(b.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn both_volume_modes_agree_on_smooth_data() {
        let mesh = cartesian_mesh(2, 2, [-1.0, 1.0, -1.0, 1.0]).unwrap();
        let s = build_dg_space(&mesh, 4).unwrap();
        let mut case = make_case("smooth").unwrap();
        let bc = BoundaryData::from_case(&case);
        let opts = LoadOptions::default();
        let pen = PenaltyConfig::default();
        case.load_mode = LoadMode::Direct;
        let direct = assemble_load(&s, &case, &bc, &pen, &opts);
        case.load_mode = LoadMode::IntegrationByParts;
        let ibp = assemble_load(&s, &case, &bc, &pen, &opts);
        let scale = direct.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in direct.iter().zip(&ibp) {
            assert!((a - b).abs() < 1e-9 * scale, "{a} {b}");
        }
    }

    #[test]
    fn exact_polynomial_satisfies_the_discrete_equations() {
        let mesh = cartesian_mesh(2, 2, [-1.0, 1.0, -1.0, 1.0]).unwrap();
        let s = build_dg_space(&mesh, 4).unwrap();
        let case = make_case("quartic").unwrap();
        let pen = PenaltyConfig::default();
        let b = assemble_load(
            &s,
            &case,
            &BoundaryData::from_case(&case),
            &pen,
            &LoadOptions::default(),
        );
        let u = s.l2_project(|x| case.value(x[0], x[1]), 4);
        let au = assemble_ipdg(&s, &pen).matvec(&u);
        let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in au.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9 * scale, "{x} {y}");
        }
    }
}
