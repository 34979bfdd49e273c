//! Symmetric envelope (profile) matrices, Cholesky solves and sampled
//! generalized Rayleigh quotients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Symmetric matrix stored as its lower triangle, row by row.
///
/// Row `i` holds columns `first[i]..=i`; entries left of `first[i]` are
/// zero. A dense matrix is the case `first[i] = 0`. Cholesky factors inherit
/// the same envelope, so no fill-in storage is needed.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self::with_profile((0..n).map(|_| 0).collect())
    }

    /// Zero matrix with row `i` stored from column `first[i]`.
    pub fn with_profile(first: Vec<usize>) -> Self {
        let n = first.len();
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0;
        for (i, &f) in first.iter().enumerate() {
            assert!(f <= i, "profile start {f} beyond diagonal of row {i}");
            start.push(total);
            total += i - f + 1;
        }
        start.push(total);
        Self {
            n,
            first,
            start,
            data: vec![0.0; total],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::with_profile((0..n).collect());
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn profile(&self) -> &[usize] {
        &self.first
    }

    /// Number of stored entries.
    pub fn stored(&self) -> usize {
        self.data.len()
    }

    fn index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        (j >= self.first[i]).then(|| self.start[i] + j - self.first[i])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.index(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    ///
    /// # Panics
    /// If the entry lies outside the envelope.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.index(i, j).expect("entry outside envelope");
        self.data[k] = v;
    }

    /// Adds to entries `(i, j)` and `(j, i)` (once, for the symmetric pair).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.index(i, j).expect("entry outside envelope");
        self.data[k] += v;
    }

    /// Stored part of row `i`: columns `first[i]..=i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[self.start[i]..self.start[i + 1]]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[self.start[i]..self.start[i + 1]]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let f = self.first[i];
            let row = self.row(i);
            let (off, diag) = row.split_at(row.len() - 1);
            let mut s = diag[0] * x[i];
            for (k, &a) in off.iter().enumerate() {
                s += a * x[f + k];
                y[f + k] += a * x[i];
            }
            y[i] += s;
        }
        y
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.matvec(x))
    }

    /// `self + alpha * other`; the result uses the wider envelope.
    pub fn add_scaled(&self, alpha: f64, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        let first = self.first.iter().zip(&other.first).map(|(a, b)| *a.min(b)).collect();
        let mut out = SymMatrix::with_profile(first);
        for i in 0..self.n {
            for j in out.first[i]..=i {
                out.set(i, j, self.get(i, j) + alpha * other.get(i, j));
            }
        }
        out
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Principal submatrix on the ascending index list `keep`.
    pub fn submatrix(&self, keep: &[usize]) -> SymMatrix {
        assert!(keep.windows(2).all(|w| w[0] < w[1]), "indices must ascend");
        let first: Vec<usize> = keep
            .iter()
            .enumerate()
            .map(|(a, &i)| keep[..=a].iter().position(|&j| j >= self.first[i]).unwrap_or(a))
            .collect();
        let mut out = SymMatrix::with_profile(first);
        for (a, &i) in keep.iter().enumerate() {
            for b in out.first[a]..=a {
                out.set(a, b, self.get(i, keep[b]));
            }
        }
        out
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`, sharing the
/// envelope of `A`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: SymMatrix,
}

impl Cholesky {
    /// Crout factorization by rows.
    pub fn factor(a: &SymMatrix) -> Result<Self> {
        let mut l = a.clone();
        let n = l.n;
        for i in 0..n {
            let fi = l.first[i];
            for j in fi..=i {
                let fj = l.first[j];
                let lo = fi.max(fj);
                let s = {
                    let ri = &l.data[l.start[i] + lo - fi..l.start[i] + j - fi];
                    let rj = &l.data[l.start[j] + lo - fj..l.start[j] + j - fj];
                    dot(ri, rj)
                };
                let k = l.start[i] + j - fi;
                if j < i {
                    let djj = l.data[l.start[j + 1] - 1];
                    l.data[k] = (l.data[k] - s) / djj;
                } else {
                    let d = l.data[k] - s;
                    if !d.is_finite() || d <= 0.0 {
                        return Err(Error::NotSpd { pivot: i, value: d });
                    }
                    l.data[k] = d.sqrt();
                }
            }
        }
        Ok(Self { l })
    }

    pub fn factor_matrix(&self) -> &SymMatrix {
        &self.l
    }

    /// Solves `L Lᵀ x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.l;
        let n = l.n;
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            let f = l.first[i];
            let row = l.row(i);
            let s = dot(&row[..row.len() - 1], &y[f..i]);
            y[i] = (y[i] - s) / row[row.len() - 1];
        }
        for i in (0..n).rev() {
            let f = l.first[i];
            let row = l.row(i);
            y[i] /= row[row.len() - 1];
            let yi = y[i];
            for (k, &a) in row[..row.len() - 1].iter().enumerate() {
                y[f + k] -= a * yi;
            }
        }
        y
    }

    /// Lower-triangular product `L Lᵀ`, for reconstruction checks.
    pub fn reconstruct(&self) -> SymMatrix {
        let l = &self.l;
        let mut out = SymMatrix::with_profile(l.first.clone());
        for i in 0..l.n {
            for j in l.first[i]..=i {
                let lo = l.first[i].max(l.first[j]);
                let s: f64 = (lo..=j).map(|k| l.get(i, k) * l.get(j, k)).sum();
                out.set(i, j, s);
            }
        }
        out
    }
}

/// Solves `A x = b` by Cholesky with one sweep of iterative refinement.
pub fn cholesky_solve(a: &SymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let chol = Cholesky::factor(a)?;
    Ok(refined_solve(a, &chol, b))
}

/// Cholesky solve followed by one residual correction, with the residual
/// accumulated in compensated arithmetic.
pub fn refined_solve(a: &SymMatrix, chol: &Cholesky, b: &[f64]) -> Vec<f64> {
    let mut x = chol.solve(b);
    let r = compensated_residual(a, &x, b);
    let d = chol.solve(&r);
    for (xi, di) in x.iter_mut().zip(&d) {
        *xi += di;
    }
    x
}

/// `b − A x` with every product and sum carried as an unevaluated
/// `hi + lo` pair.
pub fn compensated_residual(a: &SymMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.n;
    let mut hi = b.to_vec();
    let mut lo = vec![0.0; n];
    let mut acc = |i: usize, u: f64, v: f64| {
        let p = u * v;
        let e = (-u).mul_add(v, p);
        let s = hi[i] - p;
        let bb = s - hi[i];
        let err = (hi[i] - (s - bb)) + (-p - bb);
        hi[i] = s;
        lo[i] += err + e;
    };
    for i in 0..n {
        let f = a.first[i];
        let row = a.row(i);
        let (off, diag) = row.split_at(row.len() - 1);
        acc(i, diag[0], x[i]);
        for (k, &v) in off.iter().enumerate() {
            acc(i, v, x[f + k]);
            acc(f + k, v, x[i]);
        }
    }
    hi.iter().zip(&lo).map(|(h, l)| h + l).collect()
}

/// `‖A x − b‖_∞ / ‖b‖_∞` (or the absolute residual when `b = 0`).
pub fn relative_residual(a: &SymMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.matvec(x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let nb = max_norm(b);
    if nb > 0.0 {
        max_norm(&r) / nb
    } else {
        max_norm(&r)
    }
}

/// Extremes of sampled generalized Rayleigh quotients `xᵀAx / xᵀBx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighBounds {
    pub min: f64,
    pub max: f64,
}

const REFINEMENT_STEPS: usize = 60;

/// Samples `xᵀAx / xᵀBx` at `samples` random vectors, then sharpens the
/// extremes with inverse iteration (minimum) and power iteration (maximum)
/// on the pencil `(A, B)`.
///
/// The result is a sampled estimate: `min` is an upper bound and `max` a
/// lower bound of the true extreme generalized eigenvalues. When `A` is
/// not positive definite the minimum is sharpened by shifted power
/// iteration instead.
pub fn rayleigh_extremes(a: &SymMatrix, b: &SymMatrix, samples: usize, seed: u64) -> Result<RayleighBounds> {
    let n = a.order();
    assert_eq!(b.order(), n);
    let chol_b = Cholesky::factor(b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quotient = |x: &[f64]| a.quadratic_form(x) / b.quadratic_form(x);
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let q = quotient(&x);
        min = min.min(q);
        max = max.max(q);
    }

    let start: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let normalize = |v: &mut Vec<f64>| {
        let s = max_norm(v);
        if s > 0.0 {
            v.iter_mut().for_each(|x| *x /= s);
        }
    };

    // Power iteration on B⁻¹A.
    let mut x = start.clone();
    for _ in 0..REFINEMENT_STEPS {
        x = chol_b.solve(&a.matvec(&x));
        normalize(&mut x);
    }
    let lambda_max = quotient(&x);
    max = max.max(lambda_max);

    match Cholesky::factor(a) {
        Ok(chol_a) => {
            let mut x = start;
            for _ in 0..REFINEMENT_STEPS {
                x = chol_a.solve(&b.matvec(&x));
                normalize(&mut x);
            }
            min = min.min(quotient(&x));
        }
        Err(_) => {
            // Power iteration on λ_max I − B⁻¹A.
            let mut x = start;
            for _ in 0..10 * REFINEMENT_STEPS {
                let y = chol_b.solve(&a.matvec(&x));
                x = x.iter().zip(&y).map(|(xi, yi)| lambda_max * xi - yi).collect();
                normalize(&mut x);
            }
            min = min.min(quotient(&x));
        }
    }
    Ok(RayleighBounds { min, max })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_spd(n: usize, seed: u64) -> SymMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        SymMatrix::from_fn(n, |i, j| {
            let s: f64 = (0..n).map(|k| m[k][i] * m[k][j]).sum();
            s + if i == j { 1.0 } else { 0.0 }
        })
    }

    #[test]
    fn identity_solve() {
        let b = vec![1.0, -2.0, 3.5];
        assert_eq!(cholesky_solve(&SymMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn random_spd_residual() {
        let a = random_spd(50, 3);
        let b: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let x = cholesky_solve(&a, &b).unwrap();
        assert!(relative_residual(&a, &x, &b) < 1e-12);
    }

    #[test]
    fn zero_block_is_not_spd() {
        let mut a = SymMatrix::identity(4);
        a.set(2, 2, 0.0);
        a.set(3, 3, 0.0);
        assert!(matches!(Cholesky::factor(&a), Err(Error::NotSpd { pivot: 2, .. })));
    }

    #[test]
    fn reconstruction() {
        for &n in &[1, 7, 40, 120] {
            let a = random_spd(n, n as u64);
            let c = Cholesky::factor(&a).unwrap();
            let r = c.reconstruct();
            let err = (0..n)
                .flat_map(|i| (0..=i).map(move |j| (i, j)))
                .map(|(i, j)| (r.get(i, j) - a.get(i, j)).abs())
                .fold(0.0, f64::max);
            assert!(err <= 1e-12 * a.max_abs(), "n={n} err={err}");
        }
    }

    #[test]
    fn banded_profile_matches_dense() {
        let n: usize = 30;
        let band = 3;
        let first: Vec<usize> = (0..n).map(|i| i.saturating_sub(band)).collect();
        let mut a = SymMatrix::with_profile(first);
        for i in 0..n {
            a.set(i, i, 4.0);
            for j in i.saturating_sub(band)..i {
                a.set(i, j, -0.5 / (1 + i - j) as f64);
            }
        }
        let dense = SymMatrix::from_fn(n, |i, j| a.get(i, j));
        assert!(a.stored() < dense.stored());
        let b: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        let x1 = cholesky_solve(&a, &b).unwrap();
        let x2 = cholesky_solve(&dense, &b).unwrap();
        for (u, v) in x1.iter().zip(&x2) {
            assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn submatrix_keeps_entries() {
        let a = random_spd(8, 1);
        let keep = [1, 3, 4, 7];
        let s = a.submatrix(&keep);
        for (p, &i) in keep.iter().enumerate() {
            for (q, &j) in keep.iter().enumerate() {
                assert_eq!(s.get(p, q), a.get(i, j));
            }
        }
    }

    #[test]
    fn rayleigh_examples() {
        let a = random_spd(20, 9);
        let r = rayleigh_extremes(&a, &a, 20, 1).unwrap();
        assert!((r.min - 1.0).abs() < 1e-12 && (r.max - 1.0).abs() < 1e-12);

        let n = 20;
        let d = SymMatrix::from_fn(n, |i, j| if i == j { (i + 1) as f64 } else { 0.0 });
        let r = rayleigh_extremes(&d, &SymMatrix::identity(n), 50, 2).unwrap();
        assert!((r.min - 1.0).abs() < 0.05);
        assert!((r.max - n as f64).abs() < 0.05 * n as f64);
    }

    #[test]
    fn rayleigh_detects_indefinite_pencil() {
        let n = 10;
        let d = SymMatrix::from_fn(n, |i, j| if i == j { i as f64 - 2.5 } else { 0.0 });
        let r = rayleigh_extremes(&d, &SymMatrix::identity(n), 50, 4).unwrap();
        assert!((r.min + 2.5).abs() < 1e-6);
    }
}
