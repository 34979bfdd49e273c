use super::tensor::{h2_project_tensor, MixedFn, TensorProjection};
use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point};
use crate::polylib::gauss_legendre_rule;

/// Element-by-element tensor H² projection on a Cartesian mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalInterpolant {
    pub p: usize,
    /// `[x0, x1, y0, y1]` per element.
    pub boxes: Vec<[f64; 4]>,
    pub elements: Vec<TensorProjection>,
    faces: Vec<(usize, usize, Point, Point)>,
}

/// Applies the affinely mapped `P_p` on every element of a Cartesian mesh.
/// `f(x, orders)` returns physical mixed derivatives, orders at most 2.
pub fn global_h2_interpolant(f: &MixedFn, mesh: &Mesh, p: usize) -> Result<GlobalInterpolant> {
    if mesh.cartesian.is_none() {
        return Err(Error::UnsupportedMesh(
            "the H2 interpolant needs a Cartesian mesh".into(),
        ));
    }
    let boxes: Vec<[f64; 4]> = (0..mesh.num_elements())
        .map(|e| {
            let v = mesh.element_vertices(e);
            let (xs, ys) = (v.iter().map(|q| q[0]), v.iter().map(|q| q[1]));
            [
                xs.clone().fold(f64::INFINITY, f64::min),
                xs.fold(f64::NEG_INFINITY, f64::max),
                ys.clone().fold(f64::INFINITY, f64::min),
                ys.fold(f64::NEG_INFINITY, f64::max),
            ]
        })
        .collect();
    let elements = boxes
        .iter()
        .map(|b| {
            let half = [0.5 * (b[1] - b[0]), 0.5 * (b[3] - b[2])];
            let local = |xi: &[f64], o: &[usize]| {
                let x = [b[0] + half[0] * (xi[0] + 1.0), b[2] + half[1] * (xi[1] + 1.0)];
                half[0].powi(o[0] as i32) * half[1].powi(o[1] as i32) * f(&x, o)
            };
            h2_project_tensor(&local, p, 2)
        })
        .collect::<Result<Vec<_>>>()?;
    let faces = mesh
        .interior_faces()
        .map(|(_, face)| {
            let a = mesh.vertices[face.vertices[0]];
            let b = mesh.vertices[face.vertices[1]];
            (face.plus, face.minus.expect("interior"), a, b)
        })
        .collect();
    Ok(GlobalInterpolant {
        p,
        boxes,
        elements,
        faces,
    })
}

impl GlobalInterpolant {
    /// Mixed derivative of the restriction to element `e` at physical `x`.
    pub fn eval_on(&self, e: usize, x: Point, orders: [usize; 2]) -> f64 {
        let b = self.boxes[e];
        let half = [0.5 * (b[1] - b[0]), 0.5 * (b[3] - b[2])];
        let xi = [(x[0] - b[0]) / half[0] - 1.0, (x[1] - b[2]) / half[1] - 1.0];
        self.elements[e].eval(&xi, &orders) / (half[0].powi(orders[0] as i32) * half[1].powi(orders[1] as i32))
    }

    /// Mixed derivative at `x` on the first element containing it.
    pub fn eval(&self, x: Point, orders: [usize; 2]) -> Option<f64> {
        let tol = 1e-12;
        self.boxes
            .iter()
            .position(|b| x[0] >= b[0] - tol && x[0] <= b[1] + tol && x[1] >= b[2] - tol && x[1] <= b[3] + tol)
            .map(|e| self.eval_on(e, x, orders))
    }

    /// Largest value or gradient jump over Gauss points of interior faces.
    pub fn max_interior_jump(&self) -> f64 {
        let rule = gauss_legendre_rule(self.p + 2).expect("positive order");
        let mut worst = 0.0f64;
        for &(plus, minus, a, b) in &self.faces {
            for t in &rule.nodes {
                let s = 0.5 * (1.0 + t);
                let x = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
                for o in [[0, 0], [1, 0], [0, 1]] {
                    worst = worst.max((self.eval_on(plus, x, o) - self.eval_on(minus, x, o)).abs());
                }
            }
        }
        worst
    }
}
