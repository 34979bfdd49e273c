use super::one_d::EXTRA_POINTS;
use crate::error::{Error, Result};
use crate::polylib::{gauss_legendre_rule, legendre_table, LegendreSeries, QuadratureRule};

/// Scalar field on `(-1,1)^d` with mixed derivatives: `f(x, orders)` returns
/// `∂^{orders} f (x)`, each order at most 2.
pub type MixedFn<'a> = dyn Fn(&[f64], &[usize]) -> f64 + 'a;

/// Tensor Legendre expansion of degree `p` per direction on `(-1,1)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorProjection {
    pub d: usize,
    pub p: usize,
    /// Row-major over `(j_0, ..., j_{d-1})`, last index fastest.
    pub coeffs: Vec<f64>,
}

impl TensorProjection {
    /// Mixed derivative `∂^{orders}` at `x`, each order at most 3.
    pub fn eval(&self, x: &[f64], orders: &[usize]) -> f64 {
        let tables: Vec<Vec<f64>> = (0..self.d)
            .map(|i| {
                legendre_table(self.p, x[i], orders[i])
                    .iter()
                    .map(|r| r[orders[i]])
                    .collect()
            })
            .collect();
        let n = self.p + 1;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let mut rest = idx;
                let mut prod = *c;
                for t in tables.iter().rev() {
                    prod *= t[rest % n];
                    rest /= n;
                }
                prod
            })
            .sum()
    }
}

/// One-dimensional functionals defining `P¹_p`: Legendre moments of `u''`
/// up to `p - 2`, then `u(-1)` and `u'(-1)`.
#[derive(Debug, Clone, Copy)]
enum Kind {
    Moments,
    Value,
    Slope,
}

impl Kind {
    fn order(self) -> usize {
        match self {
            Kind::Moments => 2,
            Kind::Value => 0,
            Kind::Slope => 1,
        }
    }
}

/// Legendre coefficients of the dual basis of `P¹_p`: columns are
/// `Ψ_j = ∫∫ L_j` (j <= p-2), `1` and `x + 1`.
fn dual_basis(p: usize) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = (0..=p - 2)
        .map(|j| {
            let mut l = vec![0.0; j + 1];
            l[j] = 1.0;
            LegendreSeries::new(l).antiderivative().antiderivative().coeffs
        })
        .collect();
    cols.push(vec![1.0]);
    cols.push(vec![1.0, 1.0]);
    cols
}

/// `P_p = P^x_p P^y_p (P^z_p)` on the reference square or cube.
///
/// Each factor is the 1D H² projector acting along one coordinate; the
/// composition is evaluated on a Gauss grid of `p + 10` points per
/// direction.
pub fn h2_project_tensor(f: &MixedFn, p: usize, d: usize) -> Result<TensorProjection> {
    if p < 3 {
        return Err(Error::precondition("tensor H2 projection needs p >= 3"));
    }
    if !(2..=3).contains(&d) {
        return Err(Error::precondition("tensor H2 projection needs d in {2, 3}"));
    }
    let rule = gauss_legendre_rule(p + 10).expect("positive order");
    // Scaled Legendre values (2j+1)/2 · w_q · L_j(x_q).
    let moments: Vec<Vec<f64>> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| {
            legendre_table(p - 2, x, 0)
                .iter()
                .enumerate()
                .map(|(j, r)| (2 * j + 1) as f64 / 2.0 * w * r[0])
                .collect()
        })
        .collect();
    let n = p + 1;
    let mut dual = vec![0.0; n.pow(d as u32)];
    let mut kinds = vec![Kind::Moments; d];
    loop {
        accumulate(f, &kinds, &rule, &moments, p, &mut dual);
        if !advance(&mut kinds) {
            break;
        }
    }
    let basis = dual_basis(p);
    let mut coeffs = dual;
    for axis in 0..d {
        coeffs = apply_along(&coeffs, n, d, axis, &basis);
    }
    Ok(TensorProjection { d, p, coeffs })
}

fn advance(kinds: &mut [Kind]) -> bool {
    for k in kinds.iter_mut().rev() {
        match k {
            Kind::Moments => {
                *k = Kind::Value;
                return true;
            }
            Kind::Value => {
                *k = Kind::Slope;
                return true;
            }
            Kind::Slope => *k = Kind::Moments,
        }
    }
    false
}

/// Adds the functionals of one kind combination to the dual coefficients.
fn accumulate(f: &MixedFn, kinds: &[Kind], rule: &QuadratureRule, moments: &[Vec<f64>], p: usize, out: &mut [f64]) {
    let d = kinds.len();
    let n = p + 1;
    let orders: Vec<usize> = kinds.iter().map(|k| k.order()).collect();
    let npts: Vec<usize> = kinds
        .iter()
        .map(|k| if matches!(k, Kind::Moments) { rule.len() } else { 1 })
        .collect();
    let total: usize = npts.iter().product();
    let mut x = vec![-1.0; d];
    let mut q = vec![0usize; d];
    for flat in 0..total {
        let mut rest = flat;
        for i in (0..d).rev() {
            q[i] = rest % npts[i];
            rest /= npts[i];
            x[i] = if matches!(kinds[i], Kind::Moments) {
                rule.nodes[q[i]]
            } else {
                -1.0
            };
        }
        let fx = f(&x, &orders);
        // Output indices per direction with their weights.
        let rows: Vec<Vec<(usize, f64)>> = (0..d)
            .map(|i| match kinds[i] {
                Kind::Moments => moments[q[i]].iter().copied().enumerate().collect(),
                Kind::Value => vec![(p - 1, 1.0)],
                Kind::Slope => vec![(p, 1.0)],
            })
            .collect();
        scatter_product(&rows, n, fx, out);
    }
}

fn scatter_product(rows: &[Vec<(usize, f64)>], n: usize, scale: f64, out: &mut [f64]) {
    fn rec(rows: &[Vec<(usize, f64)>], n: usize, idx: usize, w: f64, out: &mut [f64]) {
        match rows.split_first() {
            None => out[idx] += w,
            Some((first, rest)) => {
                for &(j, v) in first {
                    rec(rest, n, idx * n + j, w * v, out);
                }
            }
        }
    }
    rec(rows, n, 0, scale, out);
}

/// Replaces index `axis` of the tensor by `Σ_i basis[i][j] · t[.., i, ..]`.
fn apply_along(t: &[f64], n: usize, d: usize, axis: usize, basis: &[Vec<f64>]) -> Vec<f64> {
    let stride = n.pow((d - 1 - axis) as u32);
    let mut out = vec![0.0; t.len()];
    for (idx, &v) in t.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let i = (idx / stride) % n;
        let base = idx - i * stride;
        for (j, b) in basis[i].iter().enumerate() {
            out[base + j * stride] += b * v;
        }
    }
    out
}

/// `P^{axis}_p f` evaluated at `x`, projecting along one coordinate only.
///
/// `f(x, order)` returns the `order`-th derivative along `axis`; the other
/// coordinates are held at their values in `x`.
pub fn h2_project_along(f: &dyn Fn(&[f64], usize) -> f64, p: usize, axis: usize, x: &[f64]) -> Result<f64> {
    let line = |t: f64, k: usize| {
        let mut y = x.to_vec();
        y[axis] = t;
        f(&y, k)
    };
    let ends = super::one_d::EndpointData::from_fn(line);
    let rule = gauss_legendre_rule(p + EXTRA_POINTS).expect("positive order");
    let proj = super::one_d::h2_project_1d_with(|t| line(t, 2), ends, p, &rule)?;
    Ok(proj.eval(x[axis], 0))
}
