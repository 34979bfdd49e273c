use super::graded::{graded_interval, singular_parameter, DEFAULT_LEVELS};
use super::ipdg::{face_matrix, hessian_stiffness, FaceTrace};
use super::{coupling_profile, scatter, BoundaryData, PenaltyConfig};
use crate::error::Result;
use crate::linalg::{cholesky_solve, SymMatrix};
use crate::mesh::Point;
use crate::space::reference::hierarchical_1d;
use crate::space::{C0Space, FeSpace};

/// C⁰-IPDG matrix: broken Hessian product, symmetric normal-normal
/// consistency and the `τ` penalty on normal-gradient jumps.
pub fn assemble_c0ipdg(space: &C0Space, penalty: &PenaltyConfig) -> SymMatrix {
    assemble(space, penalty, true)
}

/// Gram matrix of `‖D²v‖² + Σ_F τ‖⟦n·∇v⟧‖²`.
pub fn assemble_c0_norm(space: &C0Space, penalty: &PenaltyConfig) -> SymMatrix {
    assemble(space, penalty, false)
}

fn assemble(space: &C0Space, penalty: &PenaltyConfig, consistency: bool) -> SymMatrix {
    let mut a = SymMatrix::with_profile(coupling_profile(space));
    let core = space.core();
    for e in 0..core.mesh.num_elements() {
        let (tab, _, wts) = core.volume_tabulation(e);
        scatter(&mut a, &space.element_dofs(e), &hessian_stiffness(&tab, &wts));
    }
    for f in 0..core.mesh.faces.len() {
        let tr = FaceTrace::new(space, f);
        let n = tr.normal;
        let k = tr.jump(|t| n[0] * t[1] + n[1] * t[2]);
        let c = consistency.then(|| tr.average(|t| -normal_hessian(t, n)));
        let tau = penalty.tau(core.p, core.mesh.faces[f].length);
        scatter(&mut a, &tr.dofs, &face_matrix(&tr.weights, &[(k, c, tau)]));
    }
    a
}

pub(crate) fn normal_hessian(t: &[f64], n: Point) -> f64 {
    n[0] * n[0] * t[3] + 2.0 * n[0] * n[1] * t[4] + n[1] * n[1] * t[5]
}

/// Boundary unknowns from the edgewise H¹ projection of `g_D`: vertex
/// values interpolate, edge bubbles take the `H¹₀` projection of the rest.
/// Interior entries are zero.
pub fn c0_dirichlet_values(space: &C0Space, bc: &BoundaryData, singular: &[Point]) -> Vec<f64> {
    let core = space.core();
    let p = core.p;
    let mut out = vec![0.0; space.ndofs()];
    for (_, face) in core.mesh.boundary_faces() {
        let e = face.plus;
        let map = &core.maps[e];
        let dofs = space.element_dofs(e);
        let ends = face.vertices.map(|v| map.to_reference(core.mesh.vertices[v]));
        // Reference direction that varies along the edge and the fixed side.
        let dir = if (ends[0][1] - ends[1][1]).abs() < 1e-9 { 0 } else { 1 };
        let side = usize::from(ends[0][1 - dir] > 0.0);
        let local = |k: usize| {
            if dir == 0 {
                k * (p + 1) + side
            } else {
                side * (p + 1) + k
            }
        };
        for end in [0, 1] {
            let x = map.to_physical(corner(dir, side, end));
            out[dofs[local(end)]] = bc.g_d(x);
        }
        let a = map.to_physical(corner(dir, side, 0));
        let b = map.to_physical(corner(dir, side, 1));
        let (nodes, weights) = graded_interval(singular_parameter(a, b, singular), DEFAULT_LEVELS, p + 2);
        let tangent = [map.jac[0][dir], map.jac[1][dir]];
        let mut coeffs = vec![0.0; p + 1];
        for (t, w) in nodes.iter().zip(&weights) {
            let mut xi = corner(dir, side, 0);
            xi[dir] = *t;
            let x = map.to_physical(xi);
            let g = bc.gradient(x, face.normal);
            let dg = g[0] * tangent[0] + g[1] * tangent[1];
            for (k, n) in hierarchical_1d(p, *t).iter().enumerate().skip(2) {
                coeffs[k] += w * dg * n[1];
            }
        }
        for (k, c) in coeffs.iter().enumerate().skip(2) {
            out[dofs[local(k)]] = *c;
        }
    }
    out
}

fn corner(dir: usize, side: usize, end: usize) -> [f64; 2] {
    let mut xi = [0.0; 2];
    xi[dir] = if end == 0 { -1.0 } else { 1.0 };
    xi[1 - dir] = if side == 0 { -1.0 } else { 1.0 };
    xi
}

/// Solves for the interior unknowns with the boundary unknowns fixed to
/// `dirichlet`, returning the full coefficient vector.
pub fn solve_c0ipdg(space: &C0Space, matrix: &SymMatrix, rhs: &[f64], dirichlet: &[f64]) -> Result<Vec<f64>> {
    let interior = space.interior_dofs();
    let lifted = matrix.matvec(dirichlet);
    let b: Vec<f64> = interior.iter().map(|&i| rhs[i] - lifted[i]).collect();
    let x = cholesky_solve(&matrix.submatrix(&interior), &b)?;
    let mut out = dirichlet.to_vec();
    for (&i, v) in interior.iter().zip(x) {
        out[i] = v;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::cartesian_mesh;
    use crate::solutions::make_case;
    use crate::space::build_c0_space;

    #[test]
    fn boundary_values_reproduce_polynomial_traces() {
        let mesh = cartesian_mesh(2, 3, [-1.0, 1.0, 0.0, 1.5]).unwrap();
        let s = build_c0_space(&mesh, 4).unwrap();
        let case = make_case("quartic").unwrap();
        let u = c0_dirichlet_values(&s, &BoundaryData::from_case(&case), &[]);
        for (f, face) in mesh.boundary_faces() {
            let (pts, _) = s.core.face_rule(f);
            for x in pts {
                let got = s.eval_field(face.plus, &u, x)[0];
                assert!((got - case.value(x[0], x[1])).abs() < 1e-12, "{x:?}");
            }
        }
    }

    #[test]
    fn sigma_has_no_effect() {
        let mesh = cartesian_mesh(2, 2, [-1.0, 1.0, -1.0, 1.0]).unwrap();
        let s = build_c0_space(&mesh, 3).unwrap();
        let a = assemble_c0ipdg(&s, &PenaltyConfig::default());
        let b = assemble_c0ipdg(
            &s,
            &PenaltyConfig {
                c_sigma: 1e30,
                c_tau: 10.0,
            },
        );
        assert_eq!(a, b);
    }
}
