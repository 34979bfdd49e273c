use crate::error::{Error, Result};
use crate::polylib::{gauss_legendre_rule, ln_factorial_ratio, LegendreSeries, QuadratureRule};

/// Gauss points beyond the target degree used for projection integrals.
pub const EXTRA_POINTS: usize = 20;

/// `u(±1)` and `u'(±1)`, indexed `[at -1, at +1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EndpointData {
    pub value: [f64; 2],
    pub derivative: [f64; 2],
}

impl EndpointData {
    pub fn from_fn(f: impl Fn(f64, usize) -> f64) -> Self {
        Self {
            value: [f(-1.0, 0), f(1.0, 0)],
            derivative: [f(-1.0, 1), f(1.0, 1)],
        }
    }
}

/// A polynomial of degree `≤ p` on (-1, 1) in Legendre form.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection1D {
    pub degree: usize,
    pub series: LegendreSeries,
    /// Endpoint data the projection was built from, when it used any.
    pub endpoints: Option<EndpointData>,
}

impl Projection1D {
    /// `order`-th derivative at `x`, `order <= 3`.
    pub fn eval(&self, x: f64, order: usize) -> f64 {
        self.series.eval(x, order)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.series.coeffs
    }
}

/// Sobolev index `k` of the input; the attainable rate is `s = min(k, p-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegularityConfig {
    pub k: usize,
}

impl RegularityConfig {
    pub fn s(&self, p: usize) -> usize {
        self.k.min(p.saturating_sub(1))
    }
}

fn rule_for(p: usize) -> QuadratureRule {
    gauss_legendre_rule(p + EXTRA_POINTS).expect("positive order")
}

fn padded(mut series: LegendreSeries, p: usize) -> LegendreSeries {
    series.coeffs.resize(p + 1, 0.0);
    series
}

/// `Π⁰_p f`: truncated Legendre series.
pub fn l2_project_1d(f: impl Fn(f64) -> f64, p: usize) -> Projection1D {
    Projection1D {
        degree: p,
        series: LegendreSeries::from_function(f, p, &rule_for(p)),
        endpoints: None,
    }
}

/// `Π¹_p f`: derivative `Π⁰_{p-1} f'`, value `f(-1)` at the left end.
pub fn h1_project_1d(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, p: usize) -> Result<Projection1D> {
    if p < 1 {
        return Err(Error::precondition("H1 projection needs p >= 1"));
    }
    let mut series = LegendreSeries::from_function(df, p - 1, &rule_for(p)).antiderivative();
    let left = f(-1.0);
    series.add_constant(left);
    Ok(Projection1D {
        degree: p,
        series: padded(series, p),
        endpoints: Some(EndpointData {
            value: [left, f(1.0)],
            derivative: [f64::NAN; 2],
        }),
    })
}

/// `P¹_p f`: the Legendre series of `f''` truncated at degree `p-2`,
/// integrated twice from -1 with the endpoint data.
///
/// Matches `f` and `f'` at both endpoints.
pub fn h2_project_1d(d2f: impl Fn(f64) -> f64, endpoints: EndpointData, p: usize) -> Result<Projection1D> {
    h2_project_1d_with(d2f, endpoints, p, &rule_for(p))
}

/// [`h2_project_1d`] with an explicit rule for the Legendre integrals.
pub fn h2_project_1d_with(
    d2f: impl Fn(f64) -> f64,
    endpoints: EndpointData,
    p: usize,
    rule: &QuadratureRule,
) -> Result<Projection1D> {
    if p < 3 {
        return Err(Error::precondition("H2 projection needs p >= 3"));
    }
    let second = LegendreSeries::from_function(d2f, p - 2, rule);
    let mut first = second.antiderivative();
    first.add_constant(endpoints.derivative[0]);
    let mut value = first.antiderivative();
    value.add_constant(endpoints.value[0]);
    Ok(Projection1D {
        degree: p,
        series: padded(value, p),
        endpoints: Some(endpoints),
    })
}

/// Right-hand sides of the three error bounds for `P¹_p`, given
/// `‖u^{(s+2)}‖²`: `[second derivative, first derivative, value]`, all squared.
///
/// The value bound uses the explicit sum of the four band terms in place
/// of the asymptotic constant `c(p) ≈ p⁻⁴`.
pub fn h2_error_bounds(p: usize, s: usize, derivative_norm_sq: f64) -> [f64; 3] {
    assert!(p >= 3 && s < p, "need p >= 3 and s < p");
    let factor = ln_factorial_ratio(p - s - 1, p + s - 1).exp() * derivative_norm_sq;
    let pf = p as f64;
    [factor, factor / ((pf - 1.0) * pf), factor * band_constant(p)]
}

/// `c(p)` as the sum of the four band-term constants.
pub fn band_constant(p: usize) -> f64 {
    let p = p as f64;
    1.0 / (p * (p + 1.0) * (2.0 * p - 1.0) * (2.0 * p + 1.0))
        + 1.0 / ((p - 2.0) * (p - 1.0) * (2.0 * p - 3.0) * (2.0 * p - 1.0))
        + 1.0 / (p * (p + 2.0) * (2.0 * p + 1.0) * (2.0 * p + 3.0))
        + 1.0 / ((p - 2.0) * (p - 1.0) * (2.0 * p - 5.0) * (2.0 * p - 3.0))
}
