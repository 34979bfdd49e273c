//! Reference-element bases with derivatives through order three.
//!
//! Each basis function is tabulated as a [`Tab`] holding
//! `[v, ∂ₓ, ∂ᵧ, ∂ₓₓ, ∂ₓᵧ, ∂ᵧᵧ, ∂ₓₓₓ, ∂ₓₓᵧ, ∂ₓᵧᵧ, ∂ᵧᵧᵧ]` with respect to the
//! reference coordinates.

use crate::polylib::{gauss_jacobi_rule, gauss_legendre_rule, legendre_table};
use crate::solutions::deriv_index;

pub const NTAB: usize = 10;
pub type Tab = [f64; NTAB];

/// Modal bases on the reference square `[-1,1]²` or triangle
/// `(0,0), (1,0), (0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementBasis {
    /// Tensor products of `√((2i+1)/2) L_i`, orthonormal on the square.
    QuadLegendre,
    /// Dubiner basis, orthonormal on the triangle.
    TriangleDubiner,
    /// Tensor products of the hierarchical 1D basis `(1∓ξ)/2`,
    /// `√((2k−1)/2) ∫L_{k−1}`, used for continuous spaces.
    QuadHierarchical,
}

impl ElementBasis {
    pub fn dim(self, p: usize) -> usize {
        match self {
            ElementBasis::QuadLegendre | ElementBasis::QuadHierarchical => (p + 1) * (p + 1),
            ElementBasis::TriangleDubiner => (p + 1) * (p + 2) / 2,
        }
    }

    pub fn is_quad(self) -> bool {
        !matches!(self, ElementBasis::TriangleDubiner)
    }

    /// Tabulates all basis functions at `xi` into `out` (length `dim(p)`).
    pub fn eval(self, p: usize, xi: [f64; 2], out: &mut [Tab]) {
        debug_assert_eq!(out.len(), self.dim(p));
        match self {
            ElementBasis::QuadLegendre => {
                let tx = scaled_legendre(p, xi[0]);
                let ty = scaled_legendre(p, xi[1]);
                tensor(&tx, &ty, out);
            }
            ElementBasis::QuadHierarchical => {
                let tx = hierarchical_1d(p, xi[0]);
                let ty = hierarchical_1d(p, xi[1]);
                tensor(&tx, &ty, out);
            }
            ElementBasis::TriangleDubiner => dubiner(p, xi, out),
        }
    }

    /// Volume quadrature on the reference element with `q` points per
    /// direction: `(points, weights)`.
    pub fn volume_rule(self, q: usize) -> (Vec<[f64; 2]>, Vec<f64>) {
        if self.is_quad() {
            square_rule(q)
        } else {
            triangle_rule(q)
        }
    }
}

fn scaled_legendre(p: usize, x: f64) -> Vec<[f64; 4]> {
    let mut t = legendre_table(p, x, 3);
    for (i, row) in t.iter_mut().enumerate() {
        let s = ((2 * i + 1) as f64 / 2.0).sqrt();
        row.iter_mut().for_each(|v| *v *= s);
    }
    t
}

/// Hierarchical 1D functions `N_0 .. N_p` with derivatives through order 3.
pub fn hierarchical_1d(p: usize, x: f64) -> Vec<[f64; 4]> {
    let t = legendre_table(p.max(1), x, 2);
    let mut out = vec![[0.0; 4]; p + 1];
    out[0] = [0.5 * (1.0 - x), -0.5, 0.0, 0.0];
    out[1] = [0.5 * (1.0 + x), 0.5, 0.0, 0.0];
    for (k, row) in out.iter_mut().enumerate().skip(2) {
        let j = k - 1;
        let s = ((2 * k - 1) as f64 / 2.0).sqrt();
        // ∫_{-1}^x L_j = (L_{j+1} − L_{j−1}) / (2j+1)
        let phi = (t[j + 1][0] - t[j - 1][0]) / (2 * j + 1) as f64;
        *row = [s * phi, s * t[j][0], s * t[j][1], s * t[j][2]];
    }
    out
}

fn tensor(tx: &[[f64; 4]], ty: &[[f64; 4]], out: &mut [Tab]) {
    let n = ty.len();
    for (i, a) in tx.iter().enumerate() {
        for (j, b) in ty.iter().enumerate() {
            let o = &mut out[i * n + j];
            for k in 0..=3 {
                for dy in 0..=k {
                    o[deriv_index(k - dy, dy)] = a[k - dy] * b[dy];
                }
            }
        }
    }
}

// Derivative arrays indexed [kx][ky] with kx + ky ≤ 3.
type D3 = [[f64; 4]; 4];

fn dubiner(p: usize, xi: [f64; 2], out: &mut [Tab]) {
    let (x, y) = (xi[0], xi[1]);
    let s = 1.0 - y;
    let a = 2.0 * x + y - 1.0;

    // Q_k(x, y) = P_k(2x/(1−y) − 1) (1−y)^k through the Cartesian recurrence.
    let mut q: Vec<D3> = vec![[[0.0; 4]; 4]; p + 1];
    q[0][0][0] = 1.0;
    if p >= 1 {
        q[1][0][0] = a;
        q[1][1][0] = 2.0;
        q[1][0][1] = 1.0;
    }
    for k in 2..=p {
        let c1 = (2 * k - 1) as f64 / k as f64;
        let c2 = (k - 1) as f64 / k as f64;
        let (q1, q2) = (q[k - 1], q[k - 2]);
        let mut d: D3 = [[0.0; 4]; 4];
        for kx in 0..=3 {
            for ky in 0..=3 - kx {
                // ∂^{kx,ky} [A Q_{k−1}]
                let mut aq = a * q1[kx][ky];
                if kx >= 1 {
                    aq += 2.0 * kx as f64 * q1[kx - 1][ky];
                }
                if ky >= 1 {
                    aq += ky as f64 * q1[kx][ky - 1];
                }
                // ∂^{kx,ky} [(1−y)² Q_{k−2}]
                let mut sq = s * s * q2[kx][ky];
                if ky >= 1 {
                    sq -= 2.0 * ky as f64 * s * q2[kx][ky - 1];
                }
                if ky >= 2 {
                    sq += (ky * (ky - 1)) as f64 * q2[kx][ky - 2];
                }
                d[kx][ky] = c1 * aq - c2 * sq;
            }
        }
        q[k] = d;
    }

    let b = 2.0 * y - 1.0;
    let mut idx = 0;
    for (k, qk) in q.iter().enumerate() {
        let r = jacobi_y_derivs(p - k, (2 * k + 1) as f64, b);
        for (m, rm) in r.iter().enumerate() {
            let norm = (2.0 * (2 * k + 1) as f64 * (k + m + 1) as f64).sqrt();
            let o = &mut out[idx];
            for kx in 0..=3 {
                for ky in 0..=3 - kx {
                    let mut v = 0.0;
                    for j in 0..=ky {
                        v += binom(ky, j) * qk[kx][ky - j] * rm[j];
                    }
                    o[deriv_index(kx, ky)] = norm * v;
                }
            }
            idx += 1;
        }
    }
}

fn binom(n: usize, k: usize) -> f64 {
    match (n, k) {
        (_, 0) => 1.0,
        (n, k) if k == n => 1.0,
        (2, 1) => 2.0,
        (3, _) => 3.0,
        _ => unreachable!(),
    }
}

/// `P_m^{(alpha,0)}(2y−1)` for `m = 0..=mmax`, with y-derivatives 0..3.
fn jacobi_y_derivs(mmax: usize, alpha: f64, b: f64) -> Vec<[f64; 4]> {
    let mut r = vec![[0.0; 4]; mmax + 1];
    r[0][0] = 1.0;
    if mmax >= 1 {
        r[1][0] = 0.5 * ((alpha + 2.0) * b + alpha);
        r[1][1] = 0.5 * (alpha + 2.0);
    }
    for n in 2..=mmax {
        let nf = n as f64;
        let sum = 2.0 * nf + alpha;
        let a1 = 2.0 * nf * (nf + alpha) * (sum - 2.0);
        let a2 = (sum - 1.0) * alpha * alpha;
        let a3 = (sum - 2.0) * (sum - 1.0) * sum;
        let a4 = 2.0 * (nf + alpha - 1.0) * (nf - 1.0) * sum;
        for k in 0..=3 {
            let lower = if k > 0 { k as f64 * a3 * r[n - 1][k - 1] } else { 0.0 };
            r[n][k] = ((a2 + a3 * b) * r[n - 1][k] + lower - a4 * r[n - 2][k]) / a1;
        }
    }
    // d/dy = 2 d/db
    for row in r.iter_mut() {
        row[1] *= 2.0;
        row[2] *= 4.0;
        row[3] *= 8.0;
    }
    r
}

/// Tensor Gauss–Legendre rule on `[-1,1]²`.
pub fn square_rule(q: usize) -> (Vec<[f64; 2]>, Vec<f64>) {
    let g = gauss_legendre_rule(q).expect("q >= 1");
    let mut pts = Vec::with_capacity(q * q);
    let mut wts = Vec::with_capacity(q * q);
    for (&x, &wx) in g.nodes.iter().zip(&g.weights) {
        for (&y, &wy) in g.nodes.iter().zip(&g.weights) {
            pts.push([x, y]);
            wts.push(wx * wy);
        }
    }
    (pts, wts)
}

/// Collapsed-coordinate rule on the reference triangle:
/// Gauss–Legendre in `a`, Gauss–Jacobi(1,0) in `b`,
/// `x = (1+a)(1−b)/4`, `y = (1+b)/2`.
pub fn triangle_rule(q: usize) -> (Vec<[f64; 2]>, Vec<f64>) {
    let ga = gauss_legendre_rule(q).expect("q >= 1");
    let gb = gauss_jacobi_rule(q, 1.0, 0.0).expect("q >= 1");
    let mut pts = Vec::with_capacity(q * q);
    let mut wts = Vec::with_capacity(q * q);
    for (&a, &wa) in ga.nodes.iter().zip(&ga.weights) {
        for (&b, &wb) in gb.nodes.iter().zip(&gb.weights) {
            pts.push([0.25 * (1.0 + a) * (1.0 - b), 0.5 * (1.0 + b)]);
            wts.push(wa * wb / 8.0);
        }
    }
    (pts, wts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram(basis: ElementBasis, p: usize) -> Vec<Vec<f64>> {
        let n = basis.dim(p);
        let (pts, wts) = basis.volume_rule(p + 2);
        let mut g = vec![vec![0.0; n]; n];
        let mut tab = vec![[0.0; NTAB]; n];
        for (x, w) in pts.iter().zip(&wts) {
            basis.eval(p, *x, &mut tab);
            for i in 0..n {
                for j in 0..n {
                    g[i][j] += w * tab[i][0] * tab[j][0];
                }
            }
        }
        g
    }

    #[test]
    fn modal_bases_are_orthonormal() {
        for basis in [ElementBasis::QuadLegendre, ElementBasis::TriangleDubiner] {
            let g = gram(basis, 10);
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((v - e).abs() < 1e-12, "{basis:?} {i} {j} {v}");
                }
            }
        }
    }

    #[test]
    fn triangle_rule_integrates_monomials() {
        // ∫_T x^a y^b = a! b! / (a+b+2)!
        let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
        let (pts, wts) = triangle_rule(6);
        for a in 0..6 {
            for b in 0..6 - a {
                let q: f64 = pts
                    .iter()
                    .zip(&wts)
                    .map(|(x, w)| w * x[0].powi(a as i32) * x[1].powi(b as i32))
                    .sum();
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                assert!((q - exact).abs() < 1e-15, "a={a} b={b}");
            }
        }
    }

    fn fd_check(basis: ElementBasis, p: usize, x: [f64; 2]) {
        let n = basis.dim(p);
        let h = 1e-6;
        let mut t0 = vec![[0.0; NTAB]; n];
        let (mut tx, mut ty) = (t0.clone(), t0.clone());
        let (mut txm, mut tym) = (t0.clone(), t0.clone());
        basis.eval(p, x, &mut t0);
        basis.eval(p, [x[0] + h, x[1]], &mut tx);
        basis.eval(p, [x[0] - h, x[1]], &mut txm);
        basis.eval(p, [x[0], x[1] + h], &mut ty);
        basis.eval(p, [x[0], x[1] - h], &mut tym);
        for k in 0..n {
            for order in 1..=3 {
                for dy in 0..=order {
                    let dx = order - dy;
                    let exact = t0[k][deriv_index(dx, dy)];
                    let fd = if dx > 0 {
                        let i = deriv_index(dx - 1, dy);
                        (tx[k][i] - txm[k][i]) / (2.0 * h)
                    } else {
                        let i = deriv_index(dx, dy - 1);
                        (ty[k][i] - tym[k][i]) / (2.0 * h)
                    };
                    let scale = exact.abs().max(1.0) * (p * p) as f64;
                    assert!(
                        (exact - fd).abs() < 1e-6 * scale,
                        "{basis:?} k={k} ({dx},{dy}) {exact} {fd}"
                    );
                }
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        fd_check(ElementBasis::QuadLegendre, 6, [0.31, -0.42]);
        fd_check(ElementBasis::QuadHierarchical, 6, [-0.7, 0.13]);
        fd_check(ElementBasis::TriangleDubiner, 6, [0.21, 0.33]);
        fd_check(ElementBasis::TriangleDubiner, 5, [0.05, 0.9]);
    }

    #[test]
    fn hierarchical_bubbles_vanish_at_ends() {
        for &x in &[-1.0, 1.0] {
            let t = hierarchical_1d(8, x);
            for row in &t[2..] {
                assert!(row[0].abs() < 1e-15);
            }
        }
    }
}
