//! Contour integrals of meromorphic functions on circles.
//!
//! The trapezoid rule on a circle converges geometrically for functions
//! analytic in an annulus around it, with ratio `radius / distance to the
//! nearest singularity off the circle`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;

/// Default number of nodes on the circle.
pub const DEFAULT_NODES: usize = 256;

/// Default circle radius for residues at the half-integer lattice.
pub const DEFAULT_RADIUS: f64 = 0.25;

/// `(1/2πi) ∮ f(λ) dλ` over the circle `|λ − center| = radius`.
pub fn contour_integral<F>(f: F, center: Complex64, radius: f64, nodes: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut sum = Complex64::new(0.0, 0.0);
    let mut carry = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
        let term = f(center + w * radius)? * w;
        // Kahan summation, component-wise
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    Ok(sum * (radius / nodes as f64))
}

/// Residue (or, for several poles inside, their sum) at `center` with the
/// default circle.
pub fn residue<F>(f: F, center: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    contour_integral(f, center, DEFAULT_RADIUS, DEFAULT_NODES)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_pole() {
        let c = Complex64::new(0.3, -1.0);
        let r = residue(|z| Ok(Complex64::new(3.0, 1.0) / (z - c) + z * z), c).unwrap();
        assert!((r - Complex64::new(3.0, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn analytic_integrand_vanishes() {
        let r = contour_integral(
            |z| Ok(z.exp() * z.sin()),
            Complex64::new(1.0, 2.0),
            0.7,
            128,
        )
        .unwrap();
        assert!(r.norm() < 1e-13);
    }

    #[test]
    fn logarithmic_derivative_counts_zeros() {
        // f = (z - a)^3 (z - b), f'/f = 3/(z - a) + 1/(z - b)
        let a = Complex64::new(0.1, 0.0);
        let b = Complex64::new(-0.05, 0.1);
        let r = contour_integral(
            |z| Ok(3.0 / (z - a) + 1.0 / (z - b)),
            Complex64::new(0.0, 0.0),
            0.5,
            256,
        )
        .unwrap();
        assert!((r - 4.0).norm() < 1e-12);
    }
}
