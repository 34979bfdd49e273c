//! Discontinuous and continuous finite element spaces of uniform degree.

pub mod affine;
pub mod c0;
pub mod reference;

pub use affine::AffineMap;
pub use c0::{build_c0_space, C0Space};
pub use reference::{ElementBasis, Tab, NTAB};

use crate::error::{Error, Result};
use crate::mesh::{ElementKind, Mesh, Point};
use crate::polylib::gauss_legendre_rule;

/// Basis values and physical derivatives at a set of points:
/// `data[point * nb + k]` is the [`Tab`] of basis function `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulation {
    pub npts: usize,
    pub nb: usize,
    pub data: Vec<Tab>,
}

impl Tabulation {
    pub fn at(&self, point: usize) -> &[Tab] {
        &self.data[point * self.nb..(point + 1) * self.nb]
    }

    /// Derivative `component` of the field with local coefficients `coeffs`
    /// at every point.
    pub fn field(&self, coeffs: &[f64], component: usize) -> Vec<f64> {
        (0..self.npts)
            .map(|q| self.at(q).iter().zip(coeffs).map(|(t, c)| t[component] * c).sum())
            .collect()
    }

    /// All derivative components of the field at every point.
    pub fn field_tabs(&self, coeffs: &[f64]) -> Vec<Tab> {
        (0..self.npts)
            .map(|q| {
                let mut out = [0.0; NTAB];
                for (t, c) in self.at(q).iter().zip(coeffs) {
                    for (o, v) in out.iter_mut().zip(t) {
                        *o += c * v;
                    }
                }
                out
            })
            .collect()
    }
}

/// Geometry and reference tabulations shared by all spaces.
#[derive(Debug, Clone)]
pub struct SpaceCore {
    pub mesh: Mesh,
    pub p: usize,
    pub basis: ElementBasis,
    pub nb: usize,
    pub maps: Vec<AffineMap>,
    /// Reference volume rule with `p + 2` points per direction.
    pub volume_points: Vec<[f64; 2]>,
    pub volume_weights: Vec<f64>,
    volume_tab: Vec<Tab>,
    /// 1D Gauss rule on `[-1, 1]` used on faces.
    pub face_nodes: Vec<f64>,
    pub face_weights: Vec<f64>,
}

impl SpaceCore {
    fn new(mesh: Mesh, p: usize, basis: ElementBasis) -> Self {
        let nb = basis.dim(p);
        let maps = (0..mesh.num_elements())
            .map(|e| {
                let v = mesh.element_vertices(e);
                match mesh.kind {
                    ElementKind::Quad => AffineMap::quad(&v),
                    ElementKind::Triangle => AffineMap::triangle(&v),
                }
            })
            .collect();
        let (volume_points, volume_weights) = basis.volume_rule(p + 2);
        let mut volume_tab = vec![[0.0; NTAB]; volume_points.len() * nb];
        for (q, xi) in volume_points.iter().enumerate() {
            basis.eval(p, *xi, &mut volume_tab[q * nb..(q + 1) * nb]);
        }
        let g = gauss_legendre_rule(p + 2).expect("p + 2 >= 1");
        Self {
            mesh,
            p,
            basis,
            nb,
            maps,
            volume_points,
            volume_weights,
            volume_tab,
            face_nodes: g.nodes,
            face_weights: g.weights,
        }
    }

    /// Basis tabulation at reference points of element `e`, with
    /// derivatives mapped to physical coordinates.
    pub fn eval_basis(&self, e: usize, points: &[[f64; 2]]) -> Tabulation {
        let nb = self.nb;
        let mut data = vec![[0.0; NTAB]; points.len() * nb];
        for (q, xi) in points.iter().enumerate() {
            let chunk = &mut data[q * nb..(q + 1) * nb];
            self.basis.eval(self.p, *xi, chunk);
            for t in chunk.iter_mut() {
                *t = self.maps[e].map_tab(t);
            }
        }
        Tabulation {
            npts: points.len(),
            nb,
            data,
        }
    }

    /// Basis tabulation at physical points assumed to lie in element `e`.
    pub fn eval_basis_physical(&self, e: usize, points: &[Point]) -> Tabulation {
        let refs: Vec<[f64; 2]> = points.iter().map(|x| self.maps[e].to_reference(*x)).collect();
        self.eval_basis(e, &refs)
    }

    /// Tabulation at the default volume rule of element `e`, together with
    /// physical points and weights.
    pub fn volume_tabulation(&self, e: usize) -> (Tabulation, Vec<Point>, Vec<f64>) {
        let map = &self.maps[e];
        let data = self.volume_tab.iter().map(|t| map.map_tab(t)).collect();
        let pts = self.volume_points.iter().map(|xi| map.to_physical(*xi)).collect();
        let wts = self.volume_weights.iter().map(|w| w * map.det).collect();
        (
            Tabulation {
                npts: self.volume_points.len(),
                nb: self.nb,
                data,
            },
            pts,
            wts,
        )
    }

    /// Physical quadrature points and weights on face `f` for the 1D rule
    /// `(nodes, weights)` on `[-1, 1]`.
    pub fn face_rule_with(&self, f: usize, nodes: &[f64], weights: &[f64]) -> (Vec<Point>, Vec<f64>) {
        let face = &self.mesh.faces[f];
        let a = self.mesh.vertices[face.vertices[0]];
        let b = self.mesh.vertices[face.vertices[1]];
        let pts = nodes
            .iter()
            .map(|t| {
                let s = 0.5 * (1.0 + t);
                [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
            })
            .collect();
        let wts = weights.iter().map(|w| 0.5 * w * face.length).collect();
        (pts, wts)
    }

    pub fn face_rule(&self, f: usize) -> (Vec<Point>, Vec<f64>) {
        self.face_rule_with(f, &self.face_nodes, &self.face_weights)
    }
}

/// Common interface of [`DGSpace`] and [`C0Space`].
pub trait FeSpace {
    fn core(&self) -> &SpaceCore;
    fn ndofs(&self) -> usize;
    /// Global degrees of freedom of element `e`, in local basis order.
    fn element_dofs(&self, e: usize) -> Vec<usize>;

    fn mesh(&self) -> &Mesh {
        &self.core().mesh
    }

    fn degree(&self) -> usize {
        self.core().p
    }

    fn local_dim(&self) -> usize {
        self.core().nb
    }

    /// Local coefficients of element `e` extracted from a global vector.
    fn local_coeffs(&self, e: usize, global: &[f64]) -> Vec<f64> {
        self.element_dofs(e).iter().map(|&i| global[i]).collect()
    }

    /// Derivative tab of a global field at a physical point of element `e`.
    fn eval_field(&self, e: usize, global: &[f64], x: Point) -> Tab {
        let tab = self.core().eval_basis_physical(e, &[x]);
        tab.field_tabs(&self.local_coeffs(e, global))[0]
    }
}

/// Fully discontinuous piecewise polynomials of degree `p`: tensor degree
/// on quadrilaterals, total degree on triangles.
#[derive(Debug, Clone)]
pub struct DGSpace {
    pub core: SpaceCore,
}

/// DG space with orthonormal modal bases on every element.
pub fn build_dg_space(mesh: &Mesh, p: usize) -> Result<DGSpace> {
    if p < 2 {
        return Err(Error::precondition("DG space needs p >= 2"));
    }
    let basis = match mesh.kind {
        ElementKind::Quad => ElementBasis::QuadLegendre,
        ElementKind::Triangle => ElementBasis::TriangleDubiner,
    };
    Ok(DGSpace {
        core: SpaceCore::new(mesh.clone(), p, basis),
    })
}

impl FeSpace for DGSpace {
    fn core(&self) -> &SpaceCore {
        &self.core
    }

    fn ndofs(&self) -> usize {
        self.core.nb * self.core.mesh.num_elements()
    }

    fn element_dofs(&self, e: usize) -> Vec<usize> {
        let nb = self.core.nb;
        (e * nb..(e + 1) * nb).collect()
    }
}

impl DGSpace {
    pub fn eval_basis(&self, e: usize, points: &[[f64; 2]]) -> Tabulation {
        self.core.eval_basis(e, points)
    }

    /// Elementwise L² projection of `f`, using `extra` quadrature points per
    /// direction beyond the default rule.
    pub fn l2_project(&self, f: impl Fn(Point) -> f64, extra: usize) -> Vec<f64> {
        let core = &self.core;
        let (pts, wts) = core.basis.volume_rule(core.p + 2 + extra);
        let mut out = vec![0.0; self.ndofs()];
        for e in 0..core.mesh.num_elements() {
            let map = &core.maps[e];
            let tab = core.eval_basis(e, &pts);
            let c = &mut out[e * core.nb..(e + 1) * core.nb];
            for (q, (xi, w)) in pts.iter().zip(&wts).enumerate() {
                let fx = w * f(map.to_physical(*xi));
                for (ck, t) in c.iter_mut().zip(tab.at(q)) {
                    *ck += fx * t[0];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{cartesian_mesh, lshape_mesh};

    const SQUARE: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];

    #[test]
    fn dimensions() {
        let s = build_dg_space(&cartesian_mesh(2, 2, SQUARE).unwrap(), 2).unwrap();
        assert_eq!(s.ndofs(), 36);
        let s = build_dg_space(&lshape_mesh(), 3).unwrap();
        assert_eq!(s.ndofs(), 60);
        assert!(build_dg_space(&lshape_mesh(), 1).is_err());
    }

    #[test]
    fn physical_mass_matrix_is_scaled_identity() {
        for mesh in [cartesian_mesh(2, 2, SQUARE).unwrap(), lshape_mesh()] {
            let s = build_dg_space(&mesh, 10).unwrap();
            for e in 0..mesh.num_elements() {
                let (tab, _, wts) = s.core.volume_tabulation(e);
                let det = s.core.maps[e].det;
                for i in (0..s.core.nb).step_by(7) {
                    for j in 0..s.core.nb {
                        let m: f64 = (0..tab.npts).map(|q| wts[q] * tab.at(q)[i][0] * tab.at(q)[j][0]).sum();
                        let expect = if i == j { det } else { 0.0 };
                        assert!((m - expect).abs() < 1e-12, "{m} {expect}");
                    }
                }
            }
        }
    }

    #[test]
    fn projection_reproduces_polynomials_and_derivatives() {
        // u = x³ − 2 x y² + y, degree 3.
        let u = |x: Point| x[0].powi(3) - 2.0 * x[0] * x[1] * x[1] + x[1];
        for mesh in [cartesian_mesh(2, 3, [0.0, 2.0, -1.0, 0.5]).unwrap(), lshape_mesh()] {
            let s = build_dg_space(&mesh, 3).unwrap();
            let c = s.l2_project(u, 2);
            let x = mesh.centroid(1);
            let t = s.eval_field(1, &c, [x[0] + 0.01, x[1] - 0.02]);
            let (a, b) = (x[0] + 0.01, x[1] - 0.02);
            let exact = [
                u([a, b]),
                3.0 * a * a - 2.0 * b * b,
                -4.0 * a * b + 1.0,
                6.0 * a,
                -4.0 * b,
                -4.0 * a,
                6.0,
                0.0,
                -4.0,
                0.0,
            ];
            for k in 0..NTAB {
                assert!((t[k] - exact[k]).abs() < 1e-12, "k={k} {} {}", t[k], exact[k]);
            }
        }
    }

    #[test]
    fn constant_and_bilinear_members() {
        let s = build_dg_space(&cartesian_mesh(1, 1, SQUARE).unwrap(), 3).unwrap();
        let tab = s.eval_basis(0, &[[0.2, -0.3]]);
        let t0 = tab.at(0)[0];
        assert!(t0[1..].iter().all(|v| *v == 0.0));
        // Basis (1,1) is (3/2) x y under the identity map.
        let t = tab.at(0)[4 + 1];
        assert!((t[4] - 1.5).abs() < 1e-14 && t[3] == 0.0 && t[5] == 0.0);
    }

    #[test]
    fn traces_of_smooth_fields_agree_across_faces() {
        let u = |x: Point| (x[0] * x[1]).powi(2) + x[0];
        for mesh in [cartesian_mesh(2, 2, SQUARE).unwrap(), lshape_mesh()] {
            let s = build_dg_space(&mesh, 4).unwrap();
            let c = s.l2_project(u, 2);
            for (f, face) in mesh.interior_faces() {
                let (pts, _) = s.core.face_rule(f);
                for x in pts {
                    let a = s.eval_field(face.plus, &c, x)[0];
                    let b = s.eval_field(face.minus.unwrap(), &c, x)[0];
                    assert!((a - b).abs() < 1e-11 * (1.0 + a.abs()));
                }
            }
        }
    }
}
