use super::ipdg::{assemble_form, FaceTrace, FormTerms};
use super::PenaltyConfig;
use crate::linalg::dot;
use crate::space::{DGSpace, FeSpace};

/// Tensor-valued lifting `ℒ(u) ∈ [V]^{2×2}`: `coeffs[e][c * nb + k]` is the
/// coefficient of basis function `k` in component `c = 2i + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lifting {
    pub nb: usize,
    pub coeffs: Vec<Vec<f64>>,
}

impl Lifting {
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Whether element `e` carries a nonzero lifting.
    pub fn is_supported_on(&self, e: usize, tol: f64) -> bool {
        self.coeffs[e].iter().any(|v| v.abs() > tol)
    }
}

/// Solves `∫ ℒ(u):τ = Σ_F ∫ {n·(∇·τ)}⟦u⟧ − {τ n}·⟦∇u⟧` for all `τ`.
///
/// The reference bases are orthonormal, so the local mass matrix is
/// `det(J)·I`.
pub fn apply_lifting(space: &DGSpace, u: &[f64]) -> Lifting {
    let core = &space.core;
    let nb = core.nb;
    let mut coeffs = vec![vec![0.0; 4 * nb]; core.mesh.num_elements()];
    for f in 0..core.mesh.faces.len() {
        let tr = FaceTrace::new(space, f);
        let n = tr.normal;
        let avg = if tr.sides.len() == 2 { 0.5 } else { 1.0 };
        // Jumps of u, ∂ₓu, ∂ᵧu at the face points.
        let mut jumps = vec![[0.0; 3]; tr.points.len()];
        for (s, tab) in tr.sides.iter().enumerate() {
            let sign = if s == 0 { 1.0 } else { -1.0 };
            let e = if s == 0 {
                core.mesh.faces[f].plus
            } else {
                core.mesh.faces[f].minus.unwrap()
            };
            let vals = tab.field_tabs(&space.local_coeffs(e, u));
            for (j, v) in jumps.iter_mut().zip(&vals) {
                for c in 0..3 {
                    j[c] += sign * v[c];
                }
            }
        }
        for (s, tab) in tr.sides.iter().enumerate() {
            let e = if s == 0 {
                core.mesh.faces[f].plus
            } else {
                core.mesh.faces[f].minus.unwrap()
            };
            let out = &mut coeffs[e];
            for q in 0..tr.points.len() {
                let w = avg * tr.weights[q];
                let jmp = jumps[q];
                for (k, t) in tab.at(q).iter().enumerate() {
                    for i in 0..2 {
                        for j in 0..2 {
                            let v = n[i] * t[1 + j] * jmp[0] - t[0] * n[j] * jmp[1 + i];
                            out[(2 * i + j) * nb + k] += w * v;
                        }
                    }
                }
            }
        }
    }
    for (e, c) in coeffs.iter_mut().enumerate() {
        let det = core.maps[e].det;
        c.iter_mut().for_each(|v| *v /= det);
    }
    Lifting { nb, coeffs }
}

/// `Σ_K ∫_K ℒ : D²v`.
pub fn lifting_pairing(space: &DGSpace, lifting: &Lifting, v: &[f64]) -> f64 {
    let core = &space.core;
    let nb = core.nb;
    let mut total = 0.0;
    for e in 0..core.mesh.num_elements() {
        let (tab, _, wts) = core.volume_tabulation(e);
        let hv = tab.field_tabs(&space.local_coeffs(e, v));
        let comps: Vec<Vec<f64>> = (0..4)
            .map(|c| tab.field(&lifting.coeffs[e][c * nb..(c + 1) * nb], 0))
            .collect();
        for q in 0..tab.npts {
            let h = hv[q];
            let l = [comps[0][q], comps[1][q], comps[2][q], comps[3][q]];
            total += wts[q] * (l[0] * h[3] + (l[1] + l[2]) * h[4] + l[3] * h[5]);
        }
    }
    total
}

/// `uᵀ C v` with `C` the assembled consistency terms alone.
pub fn consistency_form(space: &DGSpace, u: &[f64], v: &[f64]) -> f64 {
    let c = assemble_form(space, &PenaltyConfig::default(), FormTerms::CONSISTENCY_ONLY);
    dot(u, &c.matvec(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::cartesian_mesh;
    use crate::space::build_dg_space;
    use rand::{Rng, SeedableRng};

    #[test]
    fn lifting_reproduces_the_consistency_terms() {
        let mesh = cartesian_mesh(2, 2, [-1.0, 1.0, -1.0, 1.0]).unwrap();
        let s = build_dg_space(&mesh, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut rand_vec = || {
            (0..s.ndofs())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect::<Vec<f64>>()
        };
        let (u, v) = (rand_vec(), rand_vec());
        let lhs = lifting_pairing(&s, &apply_lifting(&s, &u), &v) + lifting_pairing(&s, &apply_lifting(&s, &v), &u);
        let rhs = consistency_form(&s, &u, &v);
        assert!((lhs - rhs).abs() < 1e-10 * rhs.abs().max(1.0), "{lhs} {rhs}");
    }
}
