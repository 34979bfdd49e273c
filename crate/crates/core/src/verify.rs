//! Self-checks of the projectors, the Legendre identities behind them and
//! the discrete form.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{
    apply_lifting, assemble_dg_norm, assemble_form, assemble_ipdg, lifting_pairing, FormTerms, PenaltyConfig,
};
use crate::linalg::{dot, rayleigh_extremes};
use crate::mesh::{cartesian_mesh, triangulated_square};
use crate::polylib::{
    gauss_legendre_rule, legendre_eval, phi_cofactor, phi_weighted_inner, psi_cofactor, psi_weighted_inner,
    LegendreSeries,
};
use crate::projectors::{
    global_h2_interpolant, h2_error_bounds, h2_project_1d, h2_project_along, h2_project_tensor, EndpointData,
};
use crate::space::{build_dg_space, FeSpace};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

/// Every check, in a fixed order.
pub fn run_all() -> Vec<Check> {
    vec![
        h2_1d_bounds(),
        legendre_identities(),
        global_interpolant(),
        tensor_projector_3d(),
        coercivity(2..=12),
        lifting(50),
    ]
}

/// The first failed check, if any.
pub fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| !c.passed)
}

/// Slack on the right-hand sides of the 1D bounds.
pub const BOUND_SLACK: f64 = 1.0 + 1e-8;

/// The three 1D H² projector bounds for `sin(πx)`, `3 <= p <= 16` and
/// `0 <= s <= min(4, p-1)`, plus endpoint exactness.
pub fn h2_1d_bounds() -> Check {
    let rule = gauss_legendre_rule(80).expect("positive order");
    let f = |x: f64, k: usize| {
        let c = PI.powi(k as i32);
        match k % 4 {
            0 => c * (PI * x).sin(),
            1 => c * (PI * x).cos(),
            2 => -c * (PI * x).sin(),
            _ => -c * (PI * x).cos(),
        }
    };
    let mut worst = 0.0f64;
    let mut worst_end = 0.0f64;
    for p in 3..=16 {
        let proj = h2_project_1d(|x| f(x, 2), EndpointData::from_fn(f), p).expect("p >= 3");
        let err = |k: usize| rule.integrate(|x| (f(x, k) - proj.eval(x, k)).powi(2));
        let lhs = [err(2), err(1), err(0)];
        for x in [-1.0, 1.0] {
            for k in 0..2 {
                worst_end = worst_end.max((proj.eval(x, k) - f(x, k)).abs() / f(x, k).abs().max(1.0));
            }
        }
        for s in 0..=4.min(p - 1) {
            // ‖sin^{(m)}(π·)‖² = π^{2m} on (-1, 1).
            let rhs = h2_error_bounds(p, s, PI.powi(2 * (s as i32 + 2)));
            for (l, r) in lhs.iter().zip(rhs) {
                worst = worst.max(l / (r * BOUND_SLACK));
            }
        }
    }
    Check::new(
        "h2_1d_bounds",
        worst <= 1.0 && worst_end < 1e-13,
        format!("max lhs/rhs = {worst:.3e}, endpoint mismatch = {worst_end:.1e}"),
    )
}

/// `d/dx` of a Legendre series in coefficient form.
fn differentiate(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    (0..n.saturating_sub(1))
        .map(|j| (2 * j + 1) as f64 * (j + 1..n).step_by(2).map(|m| c[m]).sum::<f64>())
        .collect()
}

fn ln_fact(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Weighted orthogonality of `φ_i`, the banded `ψ_i` Gram matrix with its
/// `ℶ` entries, orthogonality of `L_i'` and the weighted Parseval identity,
/// for indices up to 15.
pub fn legendre_identities() -> Check {
    const N: usize = 15;
    let rule = gauss_legendre_rule(40).expect("positive order");
    let weighted = |a: &dyn Fn(f64) -> f64, b: &dyn Fn(f64) -> f64| rule.integrate(|x| (1.0 - x * x) * a(x) * b(x));
    let mut worst = 0.0f64;
    let mut note = |v: f64| worst = worst.max(v);

    // (1-x²)⁻¹ φ_i φ_j = (1-x²) g_i g_j.
    for i in 1..=N {
        for j in 1..=N {
            let q = weighted(&|x| phi_cofactor(i, x), &|x| phi_cofactor(j, x));
            let scale = (phi_weighted_inner(i, i) * phi_weighted_inner(j, j)).sqrt();
            note((q - phi_weighted_inner(i, j)).abs() / scale);
        }
    }

    // ψ Gram matrix: quadrature, closed form and the ℵ combination agree.
    let aleph = |l: isize, k: isize| {
        if l <= 0 || k <= 0 || l != k {
            0.0
        } else {
            phi_weighted_inner(l as usize, l as usize)
        }
    };
    for i in 1..=N {
        for j in 1..=N {
            let q = weighted(&|x| psi_cofactor(i, x), &|x| psi_cofactor(j, x));
            let (a, b) = (i as isize, j as isize);
            let combo = (aleph(a + 1, b + 1) + aleph(a - 1, b - 1) - aleph(a + 1, b - 1) - aleph(a - 1, b + 1))
                / ((2 * i + 1) * (2 * j + 1)) as f64;
            let scale = (psi_weighted_inner(i, i) * psi_weighted_inner(j, j)).sqrt();
            note((q - psi_weighted_inner(i, j)).abs() / scale);
            note((combo - psi_weighted_inner(i, j)).abs() / scale);
        }
    }

    // ∫ (1-x²) L_i' L_j' = 2 δ_ij i(i+1) / (2i+1).
    for i in 0..=N {
        for j in 0..=N {
            let q = weighted(&|x| legendre_eval(i, x, 1), &|x| legendre_eval(j, x, 1));
            let exact = if i == j {
                2.0 * (i * (i + 1)) as f64 / (2 * i + 1) as f64
            } else {
                0.0
            };
            let scale = (2.0 * ((i * (i + 1)).max(1) * (j * (j + 1)).max(1)) as f64).sqrt();
            note((q - exact).abs() / scale);
        }
    }

    // Σ_{i>=k} 2/(2i+1) (i+k)!/(i-k)! b_i² = ∫ (1-x²)^k |u^{(k+2)}|².
    let b: Vec<f64> = (0..=N).map(|i| 1.0 / (i as f64 + 1.0)).collect();
    let mut deriv = b.clone();
    for k in 0..=6 {
        let series = LegendreSeries::new(deriv.clone());
        let lhs: f64 = (k..=N)
            .map(|i| 2.0 / (2 * i + 1) as f64 * (ln_fact(i + k) - ln_fact(i - k)).exp() * b[i] * b[i])
            .sum();
        let rhs = rule.integrate(|x| (1.0 - x * x).powi(k as i32) * series.eval(x, 0).powi(2));
        note((lhs - rhs).abs() / lhs);
        deriv = differentiate(&deriv);
    }

    Check::new(
        "legendre_identities",
        worst < 1e-11,
        format!("max relative deviation = {worst:.2e}"),
    )
}

fn sin_sin(x: &[f64], o: &[usize]) -> f64 {
    let g = |t: f64, k: usize| PI.powi(k as i32) * [(PI * t).sin(), (PI * t).cos(), -(PI * t).sin()][k];
    g(x[0], o[0]) * g(x[1], o[1])
}

/// `∂_y P^x f` by a Legendre fit in `y`, against `P^x ∂_y f`.
fn commutation_defect(f: &dyn Fn(&[f64], [usize; 3]) -> f64, p: usize, axis: usize, along: usize, x: &[f64]) -> f64 {
    let rule = gauss_legendre_rule(40).expect("positive order");
    let proj_at = |t: f64, k: usize| {
        let mut y = x.to_vec();
        y[along] = t;
        let g = |z: &[f64], o: usize| {
            let mut ord = [0; 3];
            ord[axis] = o;
            ord[along] = k;
            f(z, ord)
        };
        h2_project_along(&g, p, axis, &y).expect("p >= 3")
    };
    let fit = LegendreSeries::from_function(|t| proj_at(t, 0), 30, &rule);
    (fit.eval(x[along], 1) - proj_at(x[along], 1)).abs()
}

/// C¹ continuity and reproduction of the global interpolant, and the
/// commutation `∂_y P^x = P^x ∂_y` on a 20×20 grid.
pub fn global_interpolant() -> Check {
    let mesh = cartesian_mesh(2, 2, [-1.0, 1.0, -1.0, 1.0]).expect("valid mesh");
    let g = global_h2_interpolant(&sin_sin, &mesh, 8).expect("Cartesian mesh");
    let jump = g.max_interior_jump();

    // A member of Q_8 with all mixed derivatives.
    let q = |x: &[f64], o: &[usize]| {
        let a = |t: f64, k: usize| {
            [
                t.powi(8) - 3.0 * t.powi(5) + t,
                8.0 * t.powi(7) - 15.0 * t.powi(4) + 1.0,
                56.0 * t.powi(6) - 60.0 * t.powi(3),
            ][k]
        };
        let b = |t: f64, k: usize| [(1.0 - t * t).powi(2), -4.0 * t * (1.0 - t * t), 12.0 * t * t - 4.0][k];
        a(x[0], o[0]) * b(x[1], o[1])
    };
    let gq = global_h2_interpolant(&q, &mesh, 8).expect("Cartesian mesh");
    let mut repro = 0.0f64;
    for i in 0..9 {
        for j in 0..9 {
            let x = [-0.95 + 0.2375 * i as f64, -0.95 + 0.2375 * j as f64];
            repro = repro.max((gq.eval(x, [0, 0]).expect("inside") - q(&x, &[0, 0])).abs());
        }
    }

    let f = |x: &[f64], o: [usize; 3]| {
        let s = |t: f64, k: usize| [t.sin(), t.cos(), -t.sin()][k];
        let c = |t: f64, k: usize| [t.cos(), -t.sin(), -t.cos()][k];
        s(x[0], o[0]) * c(x[1], o[1])
    };
    let mut comm = 0.0f64;
    for i in 0..20 {
        for j in 0..20 {
            let x = [-0.95 + 0.1 * i as f64, -0.95 + 0.1 * j as f64];
            comm = comm.max(commutation_defect(&f, 6, 0, 1, &x));
        }
    }
    Check::new(
        "global_interpolant",
        jump < 1e-10 && repro < 1e-12 && comm < 1e-11,
        format!("max jump = {jump:.1e}, Q_8 reproduction = {repro:.1e}, commutation = {comm:.1e}"),
    )
}

/// Reproduction of `Q_3` on the cube, vertex values, and the commutation
/// identities in three variables.
pub fn tensor_projector_3d() -> Check {
    let parts = [
        |t: f64, k: usize| [t.powi(3) - t, 3.0 * t * t - 1.0, 6.0 * t][k],
        |t: f64, k: usize| [t * t + 2.0, 2.0 * t, 2.0][k],
        |t: f64, k: usize| [t.powi(3) + 0.5, 3.0 * t * t, 6.0 * t][k],
    ];
    let cubic = |x: &[f64], o: &[usize]| (0..3).map(|i| parts[i](x[i], o[i])).product::<f64>();
    let proj = h2_project_tensor(&cubic, 3, 3).expect("valid arguments");
    let mut repro = 0.0f64;
    for x in [[-0.3, 0.7, 0.1], [0.9, -0.8, -0.5], [0.0, 0.0, 0.99]] {
        repro = repro.max((proj.eval(&x, &[0, 0, 0]) - cubic(&x, &[0, 0, 0])).abs());
    }

    let smooth = |x: &[f64], o: &[usize]| {
        let e = |t: f64, k: usize| 0.5f64.powi(k as i32) * (0.5 * t).exp();
        let s = |t: f64, k: usize| [t.sin(), t.cos(), -t.sin()][k];
        let c = |t: f64, k: usize| [t.cos(), -t.sin(), -t.cos()][k];
        e(x[0], o[0]) * s(x[1], o[1]) * c(x[2], o[2])
    };
    let ps = h2_project_tensor(&smooth, 6, 3).expect("valid arguments");
    let mut vertex = 0.0f64;
    for corner in 0..8 {
        let x: Vec<f64> = (0..3).map(|i| if corner >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
        vertex = vertex.max((ps.eval(&x, &[0, 0, 0]) - smooth(&x, &[0, 0, 0])).abs());
    }

    let f = |x: &[f64], o: [usize; 3]| smooth(x, &o);
    let mut comm = 0.0f64;
    for (axis, along) in [(0, 1), (0, 2), (1, 2), (2, 0)] {
        for i in 0..5 {
            for j in 0..5 {
                let x = [-0.9 + 0.4 * i as f64, 0.3, -0.9 + 0.4 * j as f64];
                comm = comm.max(commutation_defect(&f, 6, axis, along, &x));
            }
        }
    }
    Check::new(
        "tensor_projector_3d",
        repro < 1e-12 && vertex < 1e-12 && comm < 1e-11,
        format!("Q_3 reproduction = {repro:.1e}, vertex values = {vertex:.1e}, commutation = {comm:.1e}"),
    )
}

/// Smallest generalized Rayleigh quotient of the IPDG matrix against the
/// DG-norm Gram matrix on the 2×2 square, default penalties.
pub fn coercivity(degrees: std::ops::RangeInclusive<usize>) -> Check {
    let mesh = cartesian_mesh(2, 2, [-1.0, 1.0, -1.0, 1.0]).expect("valid mesh");
    let pen = PenaltyConfig::default();
    let mut worst = (f64::INFINITY, 0);
    for p in degrees {
        let space = build_dg_space(&mesh, p).expect("p >= 2");
        let a = assemble_ipdg(&space, &pen);
        let b = assemble_dg_norm(&space, &pen);
        match rayleigh_extremes(&a, &b, 20, p as u64) {
            Ok(r) if r.min < worst.0 => worst = (r.min, p),
            Ok(_) => {}
            Err(e) => return Check::new("coercivity", false, format!("p={p}: {e}")),
        }
    }
    Check::new(
        "coercivity",
        worst.0 >= 0.5,
        format!("min quotient = {:.4} at p={}", worst.0, worst.1),
    )
}

/// `Σ∫ ℒ(u):D²v + ℒ(v):D²u` against the assembled consistency terms for
/// random pairs on quadrilaterals and triangles.
pub fn lifting(pairs: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let meshes = [
        cartesian_mesh(2, 2, [-1.0, 1.0, -1.0, 1.0]).expect("valid mesh"),
        triangulated_square(2, 1, [-1.0, 1.0, -1.0, 1.0]).expect("valid mesh"),
    ];
    for (m, mesh) in meshes.iter().enumerate() {
        let space = build_dg_space(mesh, 3).expect("p >= 2");
        let c = assemble_form(&space, &PenaltyConfig::default(), FormTerms::CONSISTENCY_ONLY);
        let n = space.ndofs();
        let count = pairs / 2 + if m == 0 { pairs % 2 } else { 0 };
        for _ in 0..count {
            let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let lhs = lifting_pairing(&space, &apply_lifting(&space, &u), &v)
                + lifting_pairing(&space, &apply_lifting(&space, &v), &u);
            let rhs = dot(&u, &c.matvec(&v));
            worst = worst.max((lhs - rhs).abs() / rhs.abs());
        }
    }
    Check::new(
        "lifting",
        worst < 1e-10,
        format!("max relative deviation = {worst:.2e} over {pairs} pairs"),
    )
}
