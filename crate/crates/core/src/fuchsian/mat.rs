//! Double-precision SL(2,R) arithmetic used to steer the geometric searches.
//!
//! Nothing computed here is reported directly: elements selected by the
//! searches are re-evaluated from their words at the working precision.

/// Row-major `[a, b, c, d]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [f64; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([1.0, 0.0, 0.0, 1.0]);

    #[inline]
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    #[inline]
    pub fn inverse(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([d, -b, -c, a])
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[3]
    }

    pub fn pow(&self, n: u32) -> Mat2 {
        (0..n).fold(Mat2::IDENTITY, |acc, _| acc.mul(self))
    }

    pub fn neg(&self) -> Mat2 {
        Mat2(self.0.map(|x| -x))
    }

    /// Hyperboloid coordinates `(X, Y, Z)` of `g·i`, with `Z = cosh d(i, g·i)`.
    #[inline]
    pub fn orbit_point(&self) -> [f64; 3] {
        let [a, b, c, d] = self.0;
        let ab = a * a + b * b;
        let cd = c * c + d * d;
        [(ab - cd) / 2.0, a * c + b * d, (ab + cd) / 2.0]
    }

    /// `cosh d(i, g·i)`.
    #[inline]
    pub fn cosh_displacement(&self) -> f64 {
        let [a, b, c, d] = self.0;
        (a * a + b * b + c * c + d * d) / 2.0
    }

    pub fn displacement(&self) -> f64 {
        self.cosh_displacement().max(1.0).acosh()
    }

    /// `2 arccosh(|tr|/2)`, or 0 for non-hyperbolic elements.
    pub fn translation_length(&self) -> f64 {
        let half = self.trace().abs() / 2.0;
        if half <= 1.0 {
            0.0
        } else {
            2.0 * half.acosh()
        }
    }

    pub fn sup_distance(&self, other: &Mat2) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// The two fixed points on the boundary as points of the unit circle in
    /// the Klein model (repelling first is not guaranteed).
    pub fn boundary_fixed_points(&self) -> Option<([f64; 2], [f64; 2])> {
        let [a, b, c, d] = self.0;
        let disc = (a + d) * (a + d) - 4.0;
        if disc <= 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        // Fixed points [u : v] of z ↦ (az + b)/(cz + d): c u² + (d - a) u v - b v² = 0.
        // Stable quadratic roots via q = -(B + sgn(B) √disc) / 2; q ≠ 0 since disc > 0.
        let bb = d - a;
        let q = -0.5 * (bb + if bb >= 0.0 { sq } else { -sq });
        // In projective form the roots z = q / c and z = -b / q are [q : c] and
        // [-b : q], which stays finite when c or b vanishes.
        let roots = [(q, c), (-b, q)];
        let klein = |(u, v): (f64, f64)| {
            let n = u * u + v * v;
            [(u * u - v * v) / n, 2.0 * u * v / n]
        };
        Some((klein(roots[0]), klein(roots[1])))
    }
}
