//! Truncated bivariate Taylor polynomials ("jets") of total order 4.
//!
//! A jet at `(x0, y0)` stores `t[a][b] = ∂ₓᵃ∂ᵧᵇ f / (a! b!)` for `a + b ≤ 4`.
//! Sums, products and composition with scalar functions follow the product
//! and chain rules exactly, so closed-form expressions built from jets yield
//! exact partial derivatives through order four.

use std::ops::{Add, Mul, Neg, Sub};

pub const ORDER: usize = 4;
/// Number of partial derivatives of total order `≤ ORDER`.
pub const NDERIV: usize = (ORDER + 1) * (ORDER + 2) / 2;

/// Position of `∂ₓᵃ∂ᵧᵇ` in the derivative layout
/// `[1, x, y, xx, xy, yy, xxx, xxy, xyy, yyy, xxxx, ...]`.
pub const fn deriv_index(a: usize, b: usize) -> usize {
    let k = a + b;
    k * (k + 1) / 2 + b
}

const FACT: [f64; ORDER + 1] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    t: [[f64; ORDER + 1]; ORDER + 1],
}

impl Jet {
    pub fn constant(c: f64) -> Self {
        let mut t = [[0.0; ORDER + 1]; ORDER + 1];
        t[0][0] = c;
        Self { t }
    }

    /// The coordinate function `x` expanded at `x0`.
    pub fn var_x(x0: f64) -> Self {
        let mut j = Self::constant(x0);
        j.t[1][0] = 1.0;
        j
    }

    pub fn var_y(y0: f64) -> Self {
        let mut j = Self::constant(y0);
        j.t[0][1] = 1.0;
        j
    }

    pub fn value(&self) -> f64 {
        self.t[0][0]
    }

    /// `∂ₓᵃ∂ᵧᵇ` of the represented function at the expansion point.
    pub fn derivative(&self, a: usize, b: usize) -> f64 {
        self.t[a][b] * FACT[a] * FACT[b]
    }

    /// All derivatives in the [`deriv_index`] layout.
    pub fn derivatives(&self) -> [f64; NDERIV] {
        let mut d = [0.0; NDERIV];
        for k in 0..=ORDER {
            for b in 0..=k {
                d[deriv_index(k - b, b)] = self.derivative(k - b, b);
            }
        }
        d
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.t.iter_mut().flatten().for_each(|v| *v *= s);
        out
    }

    /// `g ∘ self`, given `g(v), g'(v), …, g''''(v)` at `v = self.value()`.
    pub fn compose(&self, g: [f64; ORDER + 1]) -> Self {
        let mut h = *self;
        h.t[0][0] = 0.0;
        let mut out = Self::constant(g[0]);
        let mut power = Self::constant(1.0);
        for (k, gk) in g.iter().enumerate().skip(1) {
            power = power * h;
            out = out + power.scale(gk / FACT[k]);
        }
        out
    }

    /// `self^alpha`. At a zero base, non-finite Taylor coefficients are
    /// dropped, so only the derivatives that exist there are meaningful.
    pub fn powf(&self, alpha: f64) -> Self {
        let v = self.value();
        let mut g = [0.0; ORDER + 1];
        let mut coef = 1.0;
        for (k, gk) in g.iter_mut().enumerate() {
            let term = coef * v.powf(alpha - k as f64);
            *gk = if term.is_finite() { term } else { 0.0 };
            coef *= alpha - k as f64;
        }
        self.compose(g)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c, s])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s, c])
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose([e; ORDER + 1])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for a in 0..=ORDER {
            for b in 0..=ORDER - a {
                self.t[a][b] += rhs.t[a][b];
            }
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = Jet::constant(0.0);
        for a1 in 0..=ORDER {
            for b1 in 0..=ORDER - a1 {
                let l = self.t[a1][b1];
                if l == 0.0 {
                    continue;
                }
                for a2 in 0..=ORDER - a1 - b1 {
                    for b2 in 0..=ORDER - a1 - b1 - a2 {
                        out.t[a1 + a2][b1 + b2] += l * rhs.t[a2][b2];
                    }
                }
            }
        }
        out
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.t[0][0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self + (-rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        // f = x³y + 2y² at (1.5, -0.5)
        let (x, y) = (Jet::var_x(1.5), Jet::var_y(-0.5));
        let f = x * x * x * y + y * y * 2.0;
        assert!((f.value() - (1.5f64.powi(3) * -0.5 + 0.5)).abs() < 1e-15);
        assert!((f.derivative(1, 0) - 3.0 * 2.25 * -0.5).abs() < 1e-14);
        assert!((f.derivative(2, 1) - 6.0 * 1.5).abs() < 1e-14);
        assert!((f.derivative(3, 1) - 6.0).abs() < 1e-14);
        assert!((f.derivative(0, 2) - 4.0).abs() < 1e-14);
        assert_eq!(f.derivative(4, 0), 0.0);
    }

    #[test]
    fn chain_rule_matches_closed_form() {
        // sin(x y) at (0.3, 0.7): ∂ₓ²∂ᵧ² = -4 sin(xy)… check a few entries.
        let (x0, y0) = (0.3, 0.7);
        let f = (Jet::var_x(x0) * Jet::var_y(y0)).sin();
        let p = x0 * y0;
        assert!((f.derivative(1, 0) - y0 * p.cos()).abs() < 1e-15);
        assert!((f.derivative(1, 1) - (p.cos() - p * p.sin())).abs() < 1e-14);
        assert!((f.derivative(4, 0) - y0.powi(4) * p.sin()).abs() < 1e-14);
    }

    #[test]
    fn powf_of_radius() {
        // (x² + y²)^{3/2}: ∂ₓ at (0.6, 0.8) is 3 x r.
        let (x, y) = (Jet::var_x(0.6), Jet::var_y(0.8));
        let f = (x * x + y * y).powf(1.5);
        assert!((f.value() - 1.0).abs() < 1e-15);
        assert!((f.derivative(1, 0) - 1.8).abs() < 1e-14);
    }

    #[test]
    fn layout() {
        assert_eq!(deriv_index(0, 0), 0);
        assert_eq!(deriv_index(0, 1), 2);
        assert_eq!(deriv_index(1, 1), 4);
        assert_eq!(deriv_index(0, 3), 9);
        assert_eq!(deriv_index(2, 2), 12);
        assert_eq!(deriv_index(0, 4), 14);
    }
}
