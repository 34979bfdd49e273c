use super::reference::{Tab, NTAB};
use crate::mesh::Point;
use crate::solutions::deriv_index;

/// Affine element map `x = origin + J ξ` with derivative transfer to
/// physical coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub origin: Point,
    /// `jac[r][c] = ∂x_r / ∂ξ_c`.
    pub jac: [[f64; 2]; 2],
    /// `inv[c][r] = ∂ξ_c / ∂x_r`.
    pub inv: [[f64; 2]; 2],
    pub det: f64,
    // Block-diagonal map from reference to physical derivative tabs.
    transfer: [[f64; NTAB]; NTAB],
}

impl AffineMap {
    pub fn new(origin: Point, jac: [[f64; 2]; 2]) -> Self {
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        assert!(det > 0.0, "element map must preserve orientation");
        let inv = [[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]];
        let mut transfer = [[0.0; NTAB]; NTAB];
        for k in 0..=3usize {
            for by in 0..=k {
                let rs: Vec<usize> = std::iter::repeat_n(0, k - by)
                    .chain(std::iter::repeat_n(1, by))
                    .collect();
                let row = deriv_index(k - by, by);
                for combo in 0..(1usize << k) {
                    let mut coef = 1.0;
                    let mut ones = 0;
                    for (bit, &r) in rs.iter().enumerate() {
                        let c = (combo >> bit) & 1;
                        ones += c;
                        coef *= inv[c][r];
                    }
                    transfer[row][deriv_index(k - ones, ones)] += coef;
                }
            }
        }
        Self {
            origin,
            jac,
            inv,
            det,
            transfer,
        }
    }

    /// Map for the parallelogram `v0, v1, v2, v3` onto `[-1,1]²`.
    pub fn quad(v: &[Point]) -> Self {
        let c = [
            0.25 * (v[0][0] + v[1][0] + v[2][0] + v[3][0]),
            0.25 * (v[0][1] + v[1][1] + v[2][1] + v[3][1]),
        ];
        let jac = [
            [0.5 * (v[1][0] - v[0][0]), 0.5 * (v[3][0] - v[0][0])],
            [0.5 * (v[1][1] - v[0][1]), 0.5 * (v[3][1] - v[0][1])],
        ];
        Self::new(c, jac)
    }

    /// Map for the triangle `v0, v1, v2` onto `(0,0), (1,0), (0,1)`.
    pub fn triangle(v: &[Point]) -> Self {
        let jac = [
            [v[1][0] - v[0][0], v[2][0] - v[0][0]],
            [v[1][1] - v[0][1], v[2][1] - v[0][1]],
        ];
        Self::new(v[0], jac)
    }

    pub fn to_physical(&self, xi: [f64; 2]) -> Point {
        [
            self.origin[0] + self.jac[0][0] * xi[0] + self.jac[0][1] * xi[1],
            self.origin[1] + self.jac[1][0] * xi[0] + self.jac[1][1] * xi[1],
        ]
    }

    pub fn to_reference(&self, x: Point) -> [f64; 2] {
        let d = [x[0] - self.origin[0], x[1] - self.origin[1]];
        [
            self.inv[0][0] * d[0] + self.inv[0][1] * d[1],
            self.inv[1][0] * d[0] + self.inv[1][1] * d[1],
        ]
    }

    /// Physical derivatives from reference derivatives (chain rule with
    /// constant inverse Jacobian).
    pub fn map_tab(&self, r: &Tab) -> Tab {
        const BLOCKS: [(usize, usize); 4] = [(0, 1), (1, 3), (3, 6), (6, 10)];
        let mut out = [0.0; NTAB];
        for (lo, hi) in BLOCKS {
            for row in lo..hi {
                out[row] = (lo..hi).map(|k| self.transfer[row][k] * r[k]).sum();
            }
        }
        out
    }
}
