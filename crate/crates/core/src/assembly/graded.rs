//! Composite Gauss rules refined dyadically toward singular points.

use crate::mesh::Point;
use crate::polylib::gauss_legendre_rule;
use crate::space::reference::{square_rule, triangle_rule};

/// Default number of dyadic refinement levels.
pub const DEFAULT_LEVELS: usize = 14;

const INSIDE_TOL: f64 = 1e-12;

/// A rule on a reference element: points and weights in reference measure.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RefRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl RefRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn([f64; 2]) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }

    fn push_rect(&mut self, base: &(Vec<[f64; 2]>, Vec<f64>), lo: [f64; 2], hi: [f64; 2]) {
        let h = [0.5 * (hi[0] - lo[0]), 0.5 * (hi[1] - lo[1])];
        let c = [0.5 * (hi[0] + lo[0]), 0.5 * (hi[1] + lo[1])];
        for (x, w) in base.0.iter().zip(&base.1) {
            self.points.push([c[0] + h[0] * x[0], c[1] + h[1] * x[1]]);
            self.weights.push(w * h[0] * h[1]);
        }
    }

    fn push_triangle(&mut self, base: &(Vec<[f64; 2]>, Vec<f64>), v: [[f64; 2]; 3]) {
        let e1 = [v[1][0] - v[0][0], v[1][1] - v[0][1]];
        let e2 = [v[2][0] - v[0][0], v[2][1] - v[0][1]];
        let det = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
        for (x, w) in base.0.iter().zip(&base.1) {
            self.points.push([
                v[0][0] + e1[0] * x[0] + e2[0] * x[1],
                v[0][1] + e1[1] * x[0] + e2[1] * x[1],
            ]);
            self.weights.push(w * det);
        }
    }
}

/// Tensor Gauss rule with `n` points per direction on `[-1,1]²`, graded
/// toward `s` when `s` lies in the closed square.
pub fn graded_square(s: [f64; 2], levels: usize, n: usize) -> RefRule {
    let base = square_rule(n);
    let mut rule = RefRule::default();
    if !in_square(s) {
        rule.push_rect(&base, [-1.0, -1.0], [1.0, 1.0]);
        return rule;
    }
    let s = [s[0].clamp(-1.0, 1.0), s[1].clamp(-1.0, 1.0)];
    for (x0, x1) in [(-1.0, s[0]), (s[0], 1.0)] {
        for (y0, y1) in [(-1.0, s[1]), (s[1], 1.0)] {
            if x1 - x0 <= INSIDE_TOL || y1 - y0 <= INSIDE_TOL {
                continue;
            }
            // Corner of this rectangle that coincides with s.
            let cx = if s[0] == x0 { x0 } else { x1 };
            let cy = if s[1] == y0 { y0 } else { y1 };
            let (mut lo, mut hi) = ([x0, y0], [x1, y1]);
            for _ in 0..levels {
                let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
                let xs = [(lo[0], mid[0]), (mid[0], hi[0])];
                let ys = [(lo[1], mid[1]), (mid[1], hi[1])];
                let mut next = (lo, hi);
                for &(a, b) in &xs {
                    for &(c, d) in &ys {
                        let touches = (a == cx || b == cx) && (c == cy || d == cy);
                        if touches {
                            next = ([a, c], [b, d]);
                        } else {
                            rule.push_rect(&base, [a, c], [b, d]);
                        }
                    }
                }
                (lo, hi) = next;
            }
            rule.push_rect(&base, lo, hi);
        }
    }
    rule
}

fn in_square(s: [f64; 2]) -> bool {
    s.iter().all(|v| v.abs() <= 1.0 + INSIDE_TOL)
}

/// Collapsed Gauss rule with `n²` points on the reference triangle,
/// fanned from `s` and graded toward it when `s` lies in the closed triangle.
pub fn graded_triangle(s: [f64; 2], levels: usize, n: usize) -> RefRule {
    let base = triangle_rule(n);
    let verts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    let mut rule = RefRule::default();
    let inside = s[0] >= -INSIDE_TOL && s[1] >= -INSIDE_TOL && s[0] + s[1] <= 1.0 + INSIDE_TOL;
    if !inside {
        rule.push_triangle(&base, verts);
        return rule;
    }
    for k in 0..3 {
        let (a, b) = (verts[k], verts[(k + 1) % 3]);
        let area = ((a[0] - s[0]) * (b[1] - s[1]) - (a[1] - s[1]) * (b[0] - s[0])).abs();
        if area <= INSIDE_TOL {
            continue;
        }
        let (mut pa, mut pb) = (a, b);
        for _ in 0..levels {
            let ma = [0.5 * (s[0] + pa[0]), 0.5 * (s[1] + pa[1])];
            let mb = [0.5 * (s[0] + pb[0]), 0.5 * (s[1] + pb[1])];
            rule.push_triangle(&base, [ma, pa, pb]);
            rule.push_triangle(&base, [ma, pb, mb]);
            (pa, pb) = (ma, mb);
        }
        rule.push_triangle(&base, [s, pa, pb]);
    }
    rule
}

/// Gauss rule with `n` points per cell on `[-1, 1]`, split at `s` and
/// graded toward it when `s ∈ [-1, 1]`.
pub fn graded_interval(s: Option<f64>, levels: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
    let g = gauss_legendre_rule(n).expect("n >= 1");
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut push = |a: f64, b: f64| {
        let (h, c) = (0.5 * (b - a), 0.5 * (a + b));
        for (x, w) in g.nodes.iter().zip(&g.weights) {
            nodes.push(c + h * x);
            weights.push(h * w);
        }
    };
    match s.filter(|s| s.abs() <= 1.0 + INSIDE_TOL) {
        None => push(-1.0, 1.0),
        Some(s) => {
            let s = s.clamp(-1.0, 1.0);
            for end in [-1.0, 1.0] {
                if (end - s).abs() <= INSIDE_TOL {
                    continue;
                }
                let mut far = end;
                for _ in 0..levels {
                    let mid = 0.5 * (s + far);
                    push(mid.min(far), mid.max(far));
                    far = mid;
                }
                push(s.min(far), s.max(far));
            }
        }
    }
    (nodes, weights)
}

/// Parameter in `[-1, 1]` of the first singular point lying on the segment
/// `a → b`, if any.
pub fn singular_parameter(a: Point, b: Point, singular: &[Point]) -> Option<f64> {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    singular.iter().find_map(|s| {
        let t = ((s[0] - a[0]) * d[0] + (s[1] - a[1]) * d[1]) / len2;
        let off = ((s[0] - a[0]) * d[1] - (s[1] - a[1]) * d[0]).abs() / len2.sqrt();
        (off <= 1e-12 * len2.sqrt() && (-1e-12..=1.0 + 1e-12).contains(&t)).then_some(2.0 * t - 1.0)
    })
}
