//! Manufactured solutions with exact derivatives through order four.

pub mod jet;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::Point;
pub use jet::{deriv_index, Jet, NDERIV};

/// All partial derivatives of total order `≤ 4` in the [`deriv_index`] layout.
pub type Derivs = [f64; NDERIV];

type DerivFn = dyn Fn(f64, f64) -> Derivs + Send + Sync;

/// How the volume part `(f, v)` of the load is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadMode {
    /// Elementwise integration by parts using `D²u` and `∇Δu`.
    IntegrationByParts,
    /// Quadrature of `f = Δ²u` directly.
    Direct,
}

/// A prescribed exact solution of `Δ²u = f` with its boundary data.
#[derive(Clone)]
pub struct ManufacturedCase {
    pub name: String,
    derivs: Arc<DerivFn>,
    /// Points where derivatives of order `≥ 3` blow up.
    pub singular_points: Vec<Point>,
    /// Sobolev regularity `k` with `u ∈ H^{k−ε}`; `None` for analytic cases.
    pub regularity: Option<f64>,
    pub load_mode: LoadMode,
    /// Whether `Δ²u` vanishes identically.
    pub biharmonic_free: bool,
}

impl fmt::Debug for ManufacturedCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ManufacturedCase")
            .field("name", &self.name)
            .field("singular_points", &self.singular_points)
            .field("regularity", &self.regularity)
            .field("load_mode", &self.load_mode)
            .finish()
    }
}

pub const CASE_NAMES: [&str; 7] = ["u1", "u2", "u3", "u4", "poly", "smooth", "quartic"];

impl ManufacturedCase {
    /// A case from an arbitrary derivative closure.
    pub fn custom(
        name: impl Into<String>,
        derivs: impl Fn(f64, f64) -> Derivs + Send + Sync + 'static,
        load_mode: LoadMode,
    ) -> Self {
        Self {
            name: name.into(),
            derivs: Arc::new(derivs),
            singular_points: Vec::new(),
            regularity: None,
            load_mode,
            biharmonic_free: false,
        }
    }

    pub fn derivs(&self, x: f64, y: f64) -> Derivs {
        (self.derivs)(x, y)
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.derivs(x, y)[0]
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let d = self.derivs(x, y);
        [d[1], d[2]]
    }

    /// `[u_xx, u_xy, u_yy]`.
    pub fn hessian(&self, x: f64, y: f64) -> [f64; 3] {
        let d = self.derivs(x, y);
        [d[3], d[4], d[5]]
    }

    /// `f = Δ²u = u_xxxx + 2 u_xxyy + u_yyyy`.
    pub fn rhs(&self, x: f64, y: f64) -> f64 {
        if self.biharmonic_free {
            return 0.0;
        }
        bilaplacian(&self.derivs(x, y))
    }

    /// Smallest distance from `p` to a singular point.
    pub fn distance_to_singularity(&self, p: Point) -> f64 {
        self.singular_points
            .iter()
            .map(|s| (p[0] - s[0]).hypot(p[1] - s[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn bilaplacian(d: &Derivs) -> f64 {
    d[deriv_index(4, 0)] + 2.0 * d[deriv_index(2, 2)] + d[deriv_index(0, 4)]
}

fn jet_case(name: &str, f: impl Fn(Jet, Jet) -> Jet + Send + Sync + 'static, load_mode: LoadMode) -> ManufacturedCase {
    ManufacturedCase::custom(
        name,
        move |x, y| f(Jet::var_x(x), Jet::var_y(y)).derivatives(),
        load_mode,
    )
}

fn bubble(x: Jet, y: Jet) -> Jet {
    (Jet::constant(1.0) - x * x) * (Jet::constant(1.0) - y * y)
}

fn rho_three_halves(x: Jet, y: Jet, cx: f64, cy: f64) -> Jet {
    let dx = x - cx;
    let dy = y - cy;
    (dx * dx + dy * dy).powf(1.5)
}

/// `u = r^{5/3} sin(5θ/3)` with `θ ∈ [0, 2π)`, the corner singularity of
/// the L-shaped domain.
fn corner_derivs(x: f64, y: f64) -> Derivs {
    const ALPHA: f64 = 5.0 / 3.0;
    let r = x.hypot(y);
    let mut d = [0.0; NDERIV];
    if r == 0.0 {
        return d;
    }
    let mut theta = y.atan2(x);
    if theta < -1e-12 {
        theta += 2.0 * std::f64::consts::PI;
    }
    // u = Im(z^α); ∂ₓᵃ∂ᵧᵇ z^α = iᵇ (α)_{a+b} z^{α−a−b}.
    for k in 0..=jet::ORDER {
        let mut falling = 1.0;
        for m in 0..k {
            falling *= ALPHA - m as f64;
        }
        let beta = ALPHA - k as f64;
        let (mag, arg) = (falling * r.powf(beta), beta * theta);
        let (zr, zi) = (mag * arg.cos(), mag * arg.sin());
        for b in 0..=k {
            // Multiply by iᵇ and take the imaginary part.
            let im = match b % 4 {
                0 => zi,
                1 => zr,
                2 => -zi,
                _ => -zr,
            };
            d[deriv_index(k - b, b)] = im;
        }
    }
    d
}

/// The named experiment cases.
///
/// * `u1` – `ρ^{3/2}(1−x²)(1−y²)`, `ρ` the squared distance to `(½, ½)`.
/// * `u2` – the same with the singular point at the origin.
/// * `u3` – `((x−1)² + (y−½)²)^{3/2}`, singular on the boundary.
/// * `u4` – `r^{5/3} sin(5θ/3)` on the L-shaped domain.
/// * `poly` – `(1−x²)²(1−y²)²`.
/// * `smooth` – `poly · sin(x+y)`.
/// * `quartic` – a total-degree-4 polynomial with nonzero boundary data.
pub fn make_case(name: &str) -> Result<ManufacturedCase> {
    use LoadMode::*;
    let case = match name {
        "u1" => {
            let mut c = jet_case(
                name,
                |x, y| rho_three_halves(x, y, 0.5, 0.5) * bubble(x, y),
                IntegrationByParts,
            );
            c.singular_points = vec![[0.5, 0.5]];
            c.regularity = Some(4.0);
            c
        }
        "u2" => {
            let mut c = jet_case(
                name,
                |x, y| rho_three_halves(x, y, 0.0, 0.0) * bubble(x, y),
                IntegrationByParts,
            );
            c.singular_points = vec![[0.0, 0.0]];
            c.regularity = Some(4.0);
            c
        }
        "u3" => {
            let mut c = jet_case(name, |x, y| rho_three_halves(x, y, 1.0, 0.5), IntegrationByParts);
            c.singular_points = vec![[1.0, 0.5]];
            c.regularity = Some(4.0);
            c
        }
        "u4" => {
            let mut c = ManufacturedCase::custom(name, corner_derivs, Direct);
            c.singular_points = vec![[0.0, 0.0]];
            c.regularity = Some(8.0 / 3.0);
            c.biharmonic_free = true;
            c
        }
        "poly" => jet_case(
            name,
            |x, y| {
                let b = bubble(x, y);
                b * b
            },
            Direct,
        ),
        "smooth" => jet_case(
            name,
            |x, y| {
                let b = bubble(x, y);
                b * b * (x + y).sin()
            },
            Direct,
        ),
        "quartic" => jet_case(
            name,
            |x, y| x * x * x * x - x * x * y * y * 2.0 + x * y * y * y * 0.5 + x * y * 3.0 - y + 1.0,
            Direct,
        ),
        other => return Err(Error::UnknownCase(other.to_string())),
    };
    Ok(case)
}

/// Worst relative disagreement between supplied derivatives and central
/// differences of the next-lower order, per derivative order `1..=4`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    pub max_mismatch: [f64; 4],
}

impl DerivativeReport {
    pub fn worst(&self) -> f64 {
        self.max_mismatch.iter().cloned().fold(0.0, f64::max)
    }
}

pub const FD_STEP: f64 = 1e-5;

/// Compares each supplied derivative against central differences of the
/// derivatives one order below, with step [`FD_STEP`].
///
/// Mismatches are relative to `max(|exact|, 1)`.
pub fn derivative_check(case: &ManufacturedCase, points: &[Point]) -> DerivativeReport {
    let h = FD_STEP;
    let mut worst = [0.0f64; 4];
    for &[x, y] in points {
        let d = case.derivs(x, y);
        let (dxp, dxm) = (case.derivs(x + h, y), case.derivs(x - h, y));
        let (dyp, dym) = (case.derivs(x, y + h), case.derivs(x, y - h));
        for k in 1..=jet::ORDER {
            for b in 0..=k {
                let a = k - b;
                let exact = d[deriv_index(a, b)];
                let fd = if a > 0 {
                    let i = deriv_index(a - 1, b);
                    (dxp[i] - dxm[i]) / (2.0 * h)
                } else {
                    let i = deriv_index(a, b - 1);
                    (dyp[i] - dym[i]) / (2.0 * h)
                };
                let rel = (exact - fd).abs() / exact.abs().max(1.0);
                worst[k - 1] = worst[k - 1].max(rel);
            }
        }
    }
    DerivativeReport { max_mismatch: worst }
}
