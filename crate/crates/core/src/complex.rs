//! Minimal arbitrary-precision complex numbers over `rug::Float`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::Float;

use crate::precision::Precision;

#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::new(prec.zero(), prec.zero())
    }

    pub fn one(prec: Precision) -> Self {
        Self::new(prec.one(), prec.zero())
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn from_f64(prec: Precision, re: f64, im: f64) -> Self {
        Self::new(prec.float(re), prec.float(im))
    }

    pub fn from_c64(prec: Precision, z: Complex64) -> Self {
        Self::from_f64(prec, z.re, z.im)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), self.re.square_ref())
            + Float::with_val(self.prec(), self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        Self::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        Self::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        )
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self * &rhs.recip()
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let modulus = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Self::new(modulus.clone() * c, modulus * s)
    }

    /// Principal branch logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        Self::new(
            Float::with_val(p, self.abs().ln()),
            Float::with_val(p, self.im.atan2_ref(&self.re)),
        )
    }

    /// `base^self` for a real base > 0, computed as exp(self * ln base).
    pub fn real_base_pow(base_ln: &Float, exponent: &Self) -> Self {
        exponent.scale(base_ln).exp()
    }

    /// Relative distance |a - b| / max(|a|, |b|, tiny).
    pub fn rel_diff(&self, other: &Self) -> f64 {
        let d = (self - other).abs().to_f64();
        let s = self.abs().to_f64().max(other.abs().to_f64());
        if s == 0.0 {
            d
        } else {
            d / s
        }
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }
}

impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }
}

impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &rhs.re) - Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im) + Float::with_val(p, &self.im * &rhs.re);
        BigComplex::new(re, im)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        let p = self.prec();
        BigComplex::new(Float::with_val(p, -&self.re), Float::with_val(p, -&self.im))
    }
}

/// Neumaier-compensated accumulator for high-precision complex sums.
///
/// Terms must be fed in a fixed order; the result then depends only on the
/// sequence of terms, never on how they were produced.
#[derive(Debug, Clone)]
pub struct CompensatedSum {
    sum: BigComplex,
    carry: BigComplex,
}

impl CompensatedSum {
    pub fn new(prec: Precision) -> Self {
        Self {
            sum: BigComplex::zero(prec),
            carry: BigComplex::zero(prec),
        }
    }

    pub fn add(&mut self, term: &BigComplex) {
        neumaier_step(&mut self.sum.re, &mut self.carry.re, &term.re);
        neumaier_step(&mut self.sum.im, &mut self.carry.im, &term.im);
    }

    pub fn value(&self) -> BigComplex {
        &self.sum + &self.carry
    }
}

fn neumaier_step(sum: &mut Float, carry: &mut Float, x: &Float) {
    let p = sum.prec();
    let t = Float::with_val(p, &*sum + x);
    if Float::with_val(p, sum.abs_ref()) >= Float::with_val(p, x.abs_ref()) {
        *carry += Float::with_val(p, &*sum - &t) + x;
    } else {
        *carry += Float::with_val(p, x - &t) + &*sum;
    }
    *sum = t;
}
