//! Legendre polynomials, Gauss quadrature, and the integrated Legendre
//! functions used by the H² projector.
//!
//! Everything here lives on the reference interval (-1, 1). `L_j` is the
//! classical Legendre polynomial normalized by `L_j(1) = 1`.

use crate::error::{Error, Result};
use statrs::function::gamma::ln_gamma;

/// Highest derivative order tabulated by [`legendre_table`].
pub const MAX_DERIVATIVE: usize = 3;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Value of the `order`-th derivative of `L_j` at `x`.
///
/// Uses the three-term recurrence
/// `(n+1) L_{n+1} = (2n+1) x L_n - n L_{n-1}` differentiated `order` times:
/// `(n+1) L^{(k)}_{n+1} = (2n+1) (k L^{(k-1)}_n + x L^{(k)}_n) - n L^{(k)}_{n-1}`.
pub fn legendre_eval(j: usize, x: f64, order: usize) -> f64 {
    assert!(order <= MAX_DERIVATIVE, "derivative order {order} > {MAX_DERIVATIVE}");
    legendre_table(j, x, order)[j][order]
}

/// Tabulates `L_0..=L_nmax` and their derivatives up to `max_order` at `x`.
///
/// Entry `[j][k]` holds `L_j^{(k)}(x)`; derivative slots above `max_order`
/// are left at zero.
pub fn legendre_table(nmax: usize, x: f64, max_order: usize) -> Vec<[f64; 4]> {
    assert!(max_order <= MAX_DERIVATIVE);
    let mut t = vec![[0.0; 4]; nmax + 1];
    t[0][0] = 1.0;
    if nmax >= 1 {
        t[1][0] = x;
        if max_order >= 1 {
            t[1][1] = 1.0;
        }
    }
    for n in 1..nmax {
        let a = (2 * n + 1) as f64;
        let b = n as f64;
        let c = (n + 1) as f64;
        for k in 0..=max_order {
            let lower = if k > 0 { k as f64 * t[n][k - 1] } else { 0.0 };
            t[n + 1][k] = (a * (lower + x * t[n][k]) - b * t[n - 1][k]) / c;
        }
    }
    t
}

/// A one-dimensional quadrature rule on (-1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Highest polynomial degree integrated exactly against the rule's weight.
    pub exact_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule to `f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// The same rule mapped affinely onto `(a, b)`.
    pub fn mapped(&self, a: f64, b: f64) -> QuadratureRule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| half * w).collect(),
            exact_degree: self.exact_degree,
        }
    }
}

/// `n`-point Gauss–Legendre rule, exact up to degree `2n - 1`.
pub fn gauss_legendre_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::precondition("Gauss-Legendre rule needs n >= 1"));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-type estimate of the i-th largest root.
        let mut x = (std::f64::consts::PI * (4 * i + 3) as f64 / (4 * n + 2) as f64).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (l, dl) = legendre_with_derivative(n, x);
            let dx = l / dl;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Quadrature(format!(
                "Gauss-Legendre root {i} of {n} did not converge"
            )));
        }
        let (_, dl) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dl * dl);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        exact_degree: 2 * n - 1,
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let t = legendre_table(n, x, 1);
    (t[n][0], t[n][1])
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(x)` and its first derivative.
pub fn jacobi_with_derivative(n: usize, alpha: f64, beta: f64, x: f64) -> (f64, f64) {
    let value = |deg: usize, a: f64, b: f64| -> f64 {
        if deg == 0 {
            return 1.0;
        }
        let mut p0 = 1.0;
        let mut p1 = 0.5 * ((a + b + 2.0) * x + (a - b));
        for k in 2..=deg {
            let k = k as f64;
            let s = 2.0 * k + a + b;
            let a1 = 2.0 * k * (k + a + b) * (s - 2.0);
            let a2 = (s - 1.0) * (a * a - b * b);
            let a3 = (s - 2.0) * (s - 1.0) * s;
            let a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
            let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    let p = value(n, alpha, beta);
    let dp = if n == 0 {
        0.0
    } else {
        0.5 * (n as f64 + alpha + beta + 1.0) * value(n - 1, alpha + 1.0, beta + 1.0)
    };
    (p, dp)
}

/// `n`-point Gauss–Jacobi rule for the weight `(1-x)^alpha (1+x)^beta`,
/// exact up to degree `2n - 1`.
pub fn gauss_jacobi_rule(n: usize, alpha: f64, beta: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::precondition("Gauss-Jacobi rule needs n >= 1"));
    }
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::precondition("Gauss-Jacobi exponents must exceed -1"));
    }
    let nodes = jacobi_roots(n, alpha, beta)?;
    let nf = n as f64;
    let log_c = (alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_gamma(nf + alpha + 1.0) + ln_gamma(nf + beta + 1.0)
        - ln_gamma(nf + alpha + beta + 1.0)
        - ln_gamma(nf + 1.0);
    let c = log_c.exp();
    let weights = nodes
        .iter()
        .map(|&x| {
            let (_, dp) = jacobi_with_derivative(n, alpha, beta, x);
            c / ((1.0 - x * x) * dp * dp)
        })
        .collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        exact_degree: 2 * n - 1,
    })
}

// Newton iteration with polynomial deflation, seeded by Chebyshev nodes.
fn jacobi_roots(n: usize, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    let mut roots: Vec<f64> = Vec::with_capacity(n);
    for k in 0..n {
        let mut r = -((2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
        if k > 0 {
            r = 0.5 * (r + roots[k - 1]);
        }
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let s: f64 = roots.iter().map(|&x| 1.0 / (r - x)).sum();
            let (p, dp) = jacobi_with_derivative(n, alpha, beta, r);
            let delta = -p / (dp - s * p);
            r += delta;
            if delta.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Quadrature(format!(
                "Gauss-Jacobi({alpha}, {beta}) root {k} of {n} did not converge"
            )));
        }
        roots.push(r);
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// `n`-point Gauss–Lobatto–Legendre rule (endpoints included), exact up to
/// degree `2n - 3`.
pub fn gauss_lobatto_rule(n: usize) -> Result<QuadratureRule> {
    if n < 2 {
        return Err(Error::precondition("Gauss-Lobatto rule needs n >= 2"));
    }
    let degree = n - 1;
    let mut nodes = vec![-1.0];
    if n > 2 {
        // Interior nodes are the roots of L_N', i.e. of P_{N-1}^{(1,1)}.
        nodes.extend(jacobi_roots(n - 2, 1.0, 1.0)?);
    }
    nodes.push(1.0);
    let scale = 2.0 / (degree * (degree + 1)) as f64;
    let weights = nodes
        .iter()
        .map(|&x| {
            let l = legendre_table(degree, x, 0)[degree][0];
            scale / (l * l)
        })
        .collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        exact_degree: 2 * n - 3,
    })
}

/// `φ_i(x) = ∫_{-1}^x L_i = -(1 - x²) L_i'(x) / (i (i+1))` for `i >= 1`.
pub fn phi_eval(i: usize, x: f64) -> f64 {
    assert!(i >= 1, "phi_i is defined for i >= 1");
    (1.0 - x * x) * phi_cofactor(i, x)
}

/// The polynomial `g_i` with `φ_i = (1 - x²) g_i`, i.e. `-L_i' / (i (i+1))`.
///
/// Returns 0 for `i = 0`; this is the convention under which the weighted
/// `ψ` identities hold (the singular weight kills the `φ_0` contribution).
pub fn phi_cofactor(i: usize, x: f64) -> f64 {
    if i == 0 {
        return 0.0;
    }
    let dl = legendre_table(i, x, 1)[i][1];
    -dl / (i * (i + 1)) as f64
}

/// Double antiderivative of `L_i` anchored at -1:
/// `ψ_i(x) = ∫_{-1}^x ∫_{-1}^t L_i`, for `i >= 1`.
///
/// Computed as `(φ_{i+1} - φ_{i-1}) / (2i + 1)`, with `φ_0(x) = x + 1`.
pub fn psi_eval(i: usize, x: f64) -> f64 {
    assert!(i >= 1, "psi_i is defined for i >= 1");
    let lower = if i == 1 { x + 1.0 } else { phi_eval(i - 1, x) };
    (phi_eval(i + 1, x) - lower) / (2 * i + 1) as f64
}

/// Polynomial cofactor `h_i` of the weighted-orthogonality form of `ψ_i`:
/// `ψ_i = (1 - x²) h_i` for `i >= 2`.
///
/// For `i = 1` the `φ_0` term is dropped, matching the convention under
/// which the band identities ([`beth1`]..[`beth4`]) are stated. Only
/// indices `i >= 2` enter the projector error expansion.
pub fn psi_cofactor(i: usize, x: f64) -> f64 {
    assert!(i >= 1);
    (phi_cofactor(i + 1, x) - phi_cofactor(i - 1, x)) / (2 * i + 1) as f64
}

/// `ℶ¹_i`: the `φ_{i+1}` part of `∫ (1-x²)⁻¹ ψ_i²`.
pub fn beth1(i: usize) -> f64 {
    let i = i as f64;
    1.0 / ((2.0 * i + 1.0) * (2.0 * i + 1.0)) * 2.0 / ((i + 1.0) * (i + 2.0) * (2.0 * i + 3.0))
}

/// `ℶ²_i`: the `φ_{i-1}` part of `∫ (1-x²)⁻¹ ψ_i²`; zero for `i = 1`.
pub fn beth2(i: usize) -> f64 {
    if i < 2 {
        return 0.0;
    }
    let i = i as f64;
    1.0 / ((2.0 * i + 1.0) * (2.0 * i + 1.0)) * 2.0 / ((i - 1.0) * i * (2.0 * i - 1.0))
}

/// `ℶ³_i = -∫ (1-x²)⁻¹ ψ_i ψ_{i+2}`.
pub fn beth3(i: usize) -> f64 {
    let i = i as f64;
    1.0 / ((2.0 * i + 1.0) * (2.0 * i + 5.0)) * 2.0 / ((i + 1.0) * (i + 2.0) * (2.0 * i + 3.0))
}

/// `ℶ⁴_i = -∫ (1-x²)⁻¹ ψ_i ψ_{i-2}`; zero for `i <= 2`.
pub fn beth4(i: usize) -> f64 {
    if i < 3 {
        return 0.0;
    }
    let i = i as f64;
    1.0 / ((2.0 * i + 1.0) * (2.0 * i - 3.0)) * 2.0 / ((i - 1.0) * i * (2.0 * i - 1.0))
}

/// Closed form of `∫ (1-x²)⁻¹ ψ_i ψ_j` for `i, j >= 1`.
pub fn psi_weighted_inner(i: usize, j: usize) -> f64 {
    if i == j {
        beth1(i) + beth2(i)
    } else if j == i + 2 {
        -beth3(i)
    } else if i == j + 2 {
        -beth4(i)
    } else {
        0.0
    }
}

/// Closed form of `∫ (1-x²)⁻¹ φ_i φ_j = 2 δ_ij / (i (i+1) (2i+1))`.
pub fn phi_weighted_inner(i: usize, j: usize) -> f64 {
    if i != j {
        return 0.0;
    }
    let i = i as f64;
    2.0 / (i * (i + 1.0) * (2.0 * i + 1.0))
}

/// `ln((a)! / (b)!)` for `a, b >= 0`, via log-gamma.
pub fn ln_factorial_ratio(a: usize, b: usize) -> f64 {
    ln_gamma(a as f64 + 1.0) - ln_gamma(b as f64 + 1.0)
}

/// A finite Legendre expansion `Σ_j b_j L_j` on (-1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries {
    pub coeffs: Vec<f64>,
}

impl LegendreSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![0.0; degree + 1],
        }
    }

    /// Coefficients `b_j = (2j+1)/2 ∫ f L_j` for `j <= degree`, integrated
    /// with `rule`.
    pub fn from_function(f: impl Fn(f64) -> f64, degree: usize, rule: &QuadratureRule) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let fx = w * f(x);
            let t = legendre_table(degree, x, 0);
            for (c, row) in coeffs.iter_mut().zip(&t) {
                *c += fx * row[0];
            }
        }
        for (j, c) in coeffs.iter_mut().enumerate() {
            *c *= (2 * j + 1) as f64 / 2.0;
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `order`-th derivative of the series at `x`, `order <= 3`.
    pub fn eval(&self, x: f64, order: usize) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        let t = legendre_table(self.degree(), x, order);
        self.coeffs.iter().zip(&t).map(|(c, row)| c * row[order]).sum()
    }

    /// `‖Σ b_j L_j‖²_{L²(-1,1)} = Σ 2/(2j+1) b_j²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, b)| 2.0 / (2 * j + 1) as f64 * b * b)
            .sum()
    }

    /// Series of `∫_{-1}^x` of this series (degree grows by one), using
    /// `∫ L_0 = L_0 + L_1` and `∫ L_j = (L_{j+1} - L_{j-1}) / (2j+1)`.
    pub fn antiderivative(&self) -> LegendreSeries {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            if j == 0 {
                out[0] += c;
                out[1] += c;
            } else {
                let s = c / (2 * j + 1) as f64;
                out[j + 1] += s;
                out[j - 1] -= s;
            }
        }
        LegendreSeries { coeffs: out }
    }

    pub fn add_constant(&mut self, c: f64) {
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
        self.coeffs[0] += c;
    }

    /// Drops coefficients above `degree`.
    pub fn truncated(&self, degree: usize) -> LegendreSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(degree + 1);
        LegendreSeries { coeffs }
    }
}
