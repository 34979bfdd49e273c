//! Bilinear forms, load vectors, lifting operator and error norms.

pub mod c0ipdg;
pub mod errors;
pub mod graded;
pub mod ipdg;
pub mod lifting;
pub mod load;

use std::sync::Arc;

use nalgebra::DMatrix;

pub use c0ipdg::{assemble_c0_norm, assemble_c0ipdg, c0_dirichlet_values, solve_c0ipdg};
pub use errors::{compute_errors, ErrorOptions, ErrorReport, NormKind};
pub use ipdg::{assemble_dg_norm, assemble_form, assemble_ipdg, FormTerms};
pub use lifting::{apply_lifting, consistency_form, lifting_pairing, Lifting};
pub use load::{assemble_c0_load, assemble_load, LoadOptions};

use crate::error::Result;
use crate::linalg::{cholesky_solve, SymMatrix};
use crate::mesh::Point;
use crate::solutions::ManufacturedCase;
use crate::space::FeSpace;

/// Penalty constants: `σ_F = c_σ p⁶ / h_F³`, `τ_F = c_τ p² / h_F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyConfig {
    pub c_sigma: f64,
    pub c_tau: f64,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            c_sigma: 10.0,
            c_tau: 10.0,
        }
    }
}

impl PenaltyConfig {
    pub fn sigma(&self, p: usize, h_f: f64) -> f64 {
        self.c_sigma * (p as f64).powi(6) / h_f.powi(3)
    }

    pub fn tau(&self, p: usize, h_f: f64) -> f64 {
        self.c_tau * (p as f64).powi(2) / h_f
    }
}

type PointFn = dyn Fn(Point) -> f64 + Send + Sync;
type DirectionalFn = dyn Fn(Point, Point) -> f64 + Send + Sync;

/// Essential boundary data `g_D = u` and `g_N = n·∇u` on `∂Ω`, plus the
/// tangential derivative of `g_D` needed for the full boundary gradient.
#[derive(Clone)]
pub struct BoundaryData {
    value: Arc<PointFn>,
    normal_derivative: Arc<DirectionalFn>,
    tangential_derivative: Arc<DirectionalFn>,
}

impl std::fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("BoundaryData")
    }
}

impl BoundaryData {
    pub fn new(
        value: impl Fn(Point) -> f64 + Send + Sync + 'static,
        normal_derivative: impl Fn(Point, Point) -> f64 + Send + Sync + 'static,
        tangential_derivative: impl Fn(Point, Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            normal_derivative: Arc::new(normal_derivative),
            tangential_derivative: Arc::new(tangential_derivative),
        }
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, |_, _| 0.0, |_, _| 0.0)
    }

    /// Traces of the exact solution of `case`.
    pub fn from_case(case: &ManufacturedCase) -> Self {
        let (c1, c2, c3) = (case.clone(), case.clone(), case.clone());
        Self::new(
            move |x| c1.value(x[0], x[1]),
            move |x, n| {
                let g = c2.gradient(x[0], x[1]);
                g[0] * n[0] + g[1] * n[1]
            },
            move |x, n| {
                let g = c3.gradient(x[0], x[1]);
                -g[0] * n[1] + g[1] * n[0]
            },
        )
    }

    pub fn g_d(&self, x: Point) -> f64 {
        (self.value)(x)
    }

    pub fn g_n(&self, x: Point, n: Point) -> f64 {
        (self.normal_derivative)(x, n)
    }

    /// Boundary gradient `g_N n + ∂_t g_D t` with `t = (−n_y, n_x)`.
    pub fn gradient(&self, x: Point, n: Point) -> Point {
        let gn = self.g_n(x, n);
        let gt = (self.tangential_derivative)(x, n);
        [gn * n[0] - gt * n[1], gn * n[1] + gt * n[0]]
    }
}

/// Matrix and load of a discrete problem.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: SymMatrix,
    pub rhs: Vec<f64>,
}

impl LinearSystem {
    pub fn solve(&self) -> Result<Vec<f64>> {
        cholesky_solve(&self.matrix, &self.rhs)
    }
}

/// Envelope covering every pair of unknowns that share an element or a face.
pub(crate) fn coupling_profile<S: FeSpace + ?Sized>(space: &S) -> Vec<usize> {
    let mesh = space.mesh();
    let mut first: Vec<usize> = (0..space.ndofs()).collect();
    let mut couple = |dofs: &[usize]| {
        let lo = *dofs.iter().min().expect("nonempty element");
        for &i in dofs {
            first[i] = first[i].min(lo);
        }
    };
    for e in 0..mesh.num_elements() {
        couple(&space.element_dofs(e));
    }
    for face in &mesh.faces {
        if let Some(m) = face.minus {
            let mut d = space.element_dofs(face.plus);
            d.extend(space.element_dofs(m));
            couple(&d);
        }
    }
    first
}

/// Adds a local matrix into the lower triangle: entry `(a, b)` goes to
/// `(dofs[a], dofs[b])` when `dofs[a] >= dofs[b]`, so repeated global
/// indices accumulate correctly.
pub(crate) fn scatter(global: &mut SymMatrix, dofs: &[usize], local: &DMatrix<f64>) {
    for (a, &ga) in dofs.iter().enumerate() {
        for (b, &gb) in dofs.iter().enumerate() {
            if ga >= gb {
                global.add(ga, gb, local[(a, b)]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn penalty_scaling() {
        let p = PenaltyConfig::default();
        assert_eq!(p.sigma(2, 1.0), 640.0);
        assert_eq!(p.tau(3, 0.5), 180.0);
    }

    #[test]
    fn boundary_gradient_recombines() {
        let case = crate::solutions::make_case("quartic").unwrap();
        let bc = BoundaryData::from_case(&case);
        let x = [0.3, -1.0];
        let n = [0.0, -1.0];
        let g = bc.gradient(x, n);
        let exact = case.gradient(x[0], x[1]);
        assert!((g[0] - exact[0]).abs() < 1e-14 && (g[1] - exact[1]).abs() < 1e-14);
    }
}
