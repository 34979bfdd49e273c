use std::f64::consts::PI;

use hpdg::polylib::*;
use proptest::prelude::*;

fn fine() -> QuadratureRule {
    gauss_legendre_rule(40).unwrap()
}

#[test]
fn legendre_orthogonality() {
    let rule = fine();
    for i in 0..=20 {
        for j in 0..=20 {
            let q = rule.integrate(|x| legendre_eval(i, x, 0) * legendre_eval(j, x, 0));
            let exact = if i == j { 2.0 / (2 * i + 1) as f64 } else { 0.0 };
            assert!((q - exact).abs() < 1e-13, "i={i} j={j}");
        }
    }
}

#[test]
fn derivative_orthogonality() {
    let rule = fine();
    for i in 0..=20 {
        for j in 0..=20 {
            let q = rule.integrate(|x| (1.0 - x * x) * legendre_eval(i, x, 1) * legendre_eval(j, x, 1));
            // 2/(2i+1) · (i+1)!/(i-1)!
            let exact = if i == j {
                2.0 * (i * (i + 1)) as f64 / (2 * i + 1) as f64
            } else {
                0.0
            };
            assert!((q - exact).abs() < 1e-12 * exact.max(1.0), "i={i} j={j}");
        }
    }
}

#[test]
fn phi_weighted_orthogonality() {
    let rule = fine();
    for i in 1..=15 {
        for j in 1..=15 {
            let q = rule.integrate(|x| (1.0 - x * x) * phi_cofactor(i, x) * phi_cofactor(j, x));
            assert!((q - phi_weighted_inner(i, j)).abs() < 1e-11, "i={i} j={j}");
        }
    }
    assert!((phi_weighted_inner(2, 2) - 1.0 / 15.0).abs() < 1e-16);
}

#[test]
fn psi_gram_matrix_is_banded() {
    let rule = fine();
    for i in 1..=12 {
        for j in 1..=12 {
            let q = rule.integrate(|x| (1.0 - x * x) * psi_cofactor(i, x) * psi_cofactor(j, x));
            let expected = match j as isize - i as isize {
                0 => beth1(i) + beth2(i),
                2 => -beth3(i),
                -2 => -beth4(i),
                _ => 0.0,
            };
            assert!((q - expected).abs() < 1e-11, "i={i} j={j}");
            assert!((psi_weighted_inner(i, j) - expected).abs() < 1e-18);
        }
    }
    assert!((psi_weighted_inner(1, 1) - 1.0 / 135.0).abs() < 1e-17);
    assert!((psi_weighted_inner(2, 4) + 1.0 / 1890.0).abs() < 1e-18);
}

#[test]
fn weighted_parseval_for_a_sine() {
    // u = sin(πx): Legendre coefficients of u'' to degree 40.
    let rule = gauss_legendre_rule(60).unwrap();
    let series = LegendreSeries::from_function(|x| -PI * PI * (PI * x).sin(), 40, &rule);
    let b = &series.coeffs;
    let derivs = [
        |x: f64| -PI.powi(2) * (PI * x).sin(),
        |x: f64| -PI.powi(3) * (PI * x).cos(),
        |x: f64| PI.powi(4) * (PI * x).sin(),
    ];
    let ln_fact = |n: usize| (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
    for (k, d) in derivs.iter().enumerate() {
        let lhs: f64 = (k..b.len())
            .map(|i| 2.0 / (2 * i + 1) as f64 * (ln_fact(i + k) - ln_fact(i - k)).exp() * b[i] * b[i])
            .sum();
        let tail: f64 = (36..b.len())
            .map(|i| 2.0 / (2 * i + 1) as f64 * (ln_fact(i + k) - ln_fact(i - k)).exp() * b[i] * b[i])
            .sum();
        assert!(tail < 1e-14 * lhs);
        let rhs = rule.integrate(|x| (1.0 - x * x).powi(k as i32) * d(x).powi(2));
        assert!((lhs - rhs).abs() < 1e-10 * rhs, "k={k}: {lhs} vs {rhs}");
    }
}

#[test]
fn factorial_ratio_in_log_space() {
    assert!((ln_factorial_ratio(5, 3) - 20f64.ln()).abs() < 1e-13);
    assert!(ln_factorial_ratio(30, 60).is_finite());
}

proptest! {
    #[test]
    fn gauss_rules_integrate_their_exact_degree(n in 1usize..30, seed in prop::collection::vec(-1.0f64..1.0, 60)) {
        let rule = gauss_legendre_rule(n).unwrap();
        let deg = rule.exact_degree.min(59);
        let poly = |x: f64| seed[..=deg].iter().rev().fold(0.0, |acc, c| acc * x + c);
        let exact: f64 = (0..=deg).step_by(2).map(|k| 2.0 * seed[k] / (k + 1) as f64).sum();
        prop_assert!((rule.integrate(poly) - exact).abs() < 1e-12 * (1.0 + exact.abs()));
    }

    #[test]
    fn parseval_holds(coeffs in prop::collection::vec(-2.0f64..2.0, 1..25)) {
        let s = LegendreSeries::new(coeffs);
        let q = fine().integrate(|x| s.eval(x, 0).powi(2));
        prop_assert!((q - s.l2_norm_sq()).abs() < 1e-12 * (1.0 + q));
    }

    #[test]
    fn antiderivative_differentiates_back(coeffs in prop::collection::vec(-2.0f64..2.0, 1..20), x in -1.0f64..1.0) {
        let s = LegendreSeries::new(coeffs);
        let a = s.antiderivative();
        prop_assert!(a.eval(-1.0, 0).abs() < 1e-12);
        prop_assert!((a.eval(x, 1) - s.eval(x, 0)).abs() < 1e-11);
    }
}
