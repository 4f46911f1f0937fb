//! The spectral side of the trace formula for SL(2,R): the ε-invariants of
//! `σ`, the tan/cot term, the regularized sphere trace and the identity
//! contribution to the logarithmic derivative.
//!
//! The identity contribution is modelled as
//!
//! ```text
//! Id(λ) = (g − 1) [ −2λ T(λ) + 2λ π tan(πλ) ] + c0 + c1 λ,
//! T(λ) = Σ_{n>=0} [ (2n+1) / ((n+1/2)² − λ²) − 2/(n+1) ]
//!      = −ψ(1/2 − λ) − ψ(1/2 + λ) − 2γ,
//! ```
//!
//! with `T` the sphere resolvent trace regularized by subtracting `2/(n+1)`.
//! At `λ = −(n+1/2)` both summands have residue `2n+1`, so `Id` has residue
//! `(2g−2)(2n+1)` there; at `λ = +(n+1/2)` the residues are `2n+1` and
//! `−(2n+1)` and cancel. The affine part `c0 + c1 λ` is the ambiguity of the
//! regularization and is fitted by [`calibrate`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Float;

use crate::complex::BigComplex;
use crate::divisor::LaplaceSpectrum;
use crate::error::{Error, Result};
use crate::fuchsian::LengthSpectrum;
use crate::zeta::{log_derivative, SigmaParam};

/// Distance to a pole below which evaluation is refused.
pub const POLE_TOL: f64 = 1e-12;

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A half-integer invariant, `0` or `1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfInt {
    Zero,
    Half,
}

impl HalfInt {
    pub fn value(&self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Half => 0.5,
        }
    }

    fn from_value(x: f64) -> Self {
        let r = x.rem_euclid(1.0);
        if (r - 0.5).abs() < 0.25 {
            Self::Half
        } else {
            Self::Zero
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpsilonData {
    pub eps_alpha: HalfInt,
    pub eps_sigma: HalfInt,
}

/// `exp(2πi H_α)` for `H_α = diag(1/2, −1/2)`, as a diagonal matrix.
pub fn exp_two_pi_i_h_alpha() -> [Complex64; 2] {
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    [(i2pi * 0.5).exp(), (i2pi * -0.5).exp()]
}

/// Evaluates `σ` on a diagonal element that must be `±I`.
fn sigma_on(sigma: SigmaParam, diag: [Complex64; 2]) -> Complex64 {
    let minus = diag.iter().all(|z| (z + 1.0).norm() < 1e-12);
    let plus = diag.iter().all(|z| (z - 1.0).norm() < 1e-12);
    assert!(minus || plus, "element {diag:?} is not in M = {{±I}}");
    let sign = if minus { sigma.sign_on_minus_i() } else { 1 };
    Complex64::new(f64::from(sign), 0.0)
}

/// `e^{2πi ε_α(σ)} = σ(exp(2πi H_α))` and `ε_σ ≡ |ρ| + ε_α (mod 1)`, `|ρ| = 1/2`.
pub fn epsilon_of(sigma: SigmaParam) -> EpsilonData {
    let value = sigma_on(sigma, exp_two_pi_i_h_alpha());
    let eps_alpha = HalfInt::from_value(value.arg() / (2.0 * PI));
    let eps_sigma = HalfInt::from_value(0.5 + eps_alpha.value());
    EpsilonData {
        eps_alpha,
        eps_sigma,
    }
}

fn near_lattice(x: Complex64, offset: f64) -> bool {
    let shifted = x.re - offset;
    x.im.abs() < POLE_TOL && (shifted - shifted.round()).abs() < POLE_TOL
}

/// `π tan(πλ)` for `ε_σ = 1/2`, `−π cot(πλ)` for `ε_σ = 0`.
pub fn trig_term(eps: &EpsilonData, lambda: Complex64) -> Result<Complex64> {
    let z = lambda * PI;
    match eps.eps_sigma {
        HalfInt::Half => {
            if near_lattice(lambda, 0.5) {
                return Err(Error::PoleHit(format!("{lambda}")));
            }
            Ok(z.tan() * PI)
        }
        HalfInt::Zero => {
            if near_lattice(lambda, 0.0) {
                return Err(Error::PoleHit(format!("{lambda}")));
            }
            Ok(-(z.cos() / z.sin()) * PI)
        }
    }
}

fn check_sphere_poles(lambda: Complex64, n_max: Option<u64>) -> Result<()> {
    if near_lattice(lambda, 0.5) {
        let n = (lambda.re.abs() - 0.5).round();
        if n_max.is_none_or(|m| n <= m as f64) {
            return Err(Error::PoleHit(format!("{lambda}")));
        }
    }
    Ok(())
}

/// `Σ_{n=0}^{N} [(2n+1)/((n+1/2)² − λ²) − 2/(n+1)]`.
pub fn dual_trace_partial(lambda: Complex64, n_max: u64) -> Result<Complex64> {
    check_sphere_poles(lambda, Some(n_max))?;
    let l2 = lambda * lambda;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut carry = Complex64::new(0.0, 0.0);
    for n in (0..=n_max).rev() {
        let h = n as f64 + 0.5;
        let term = (2.0 * n as f64 + 1.0) / (h * h - l2) - 2.0 / (n as f64 + 1.0);
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

/// Digamma function for complex arguments away from the poles.
pub fn digamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    // reflection keeps the upward recurrence short for very negative Re z
    if z.re < -20.0 {
        let pz = z * PI;
        return digamma(1.0 - z) - (pz.cos() / pz.sin()) * PI;
    }
    while z.re < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    // Bernoulli terms B_{2k}/(2k z^{2k})
    const B: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for b in B {
        series += pow * b;
        pow *= inv2;
    }
    acc + z.ln() - inv * 0.5 - series
}

/// The full regularized sum `Σ_{n>=0}`, via `−ψ(1/2 − λ) − ψ(1/2 + λ) − 2γ`.
pub fn dual_trace(lambda: Complex64) -> Result<Complex64> {
    check_sphere_poles(lambda, None)?;
    Ok(-digamma(0.5 - lambda) - digamma(0.5 + lambda) - 2.0 * EULER_GAMMA)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityTermModel {
    pub genus: u32,
    pub c0: f64,
    pub c1: f64,
}

impl IdentityTermModel {
    pub fn new(genus: u32) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidInput(format!(
                "genus must be >= 2, got {genus}"
            )));
        }
        Ok(Self {
            genus,
            c0: 0.0,
            c1: 0.0,
        })
    }

    pub fn with_constants(self, c0: f64, c1: f64) -> Self {
        Self { c0, c1, ..self }
    }
}

/// `(g − 1)[−2λ T(λ) + 2λ π tan(πλ)] + c0 + c1 λ`.
///
/// Both terms are singular at every half-integer; at `λ = +(n+1/2)` the
/// singularities cancel, and the value there is the limit, taken by
/// averaging over a small circle.
pub fn identity_term(model: &IdentityTermModel, lambda: Complex64) -> Result<Complex64> {
    let eps = epsilon_of(SigmaParam::Trivial);
    let raw = |l: Complex64| -> Result<Complex64> {
        let t = dual_trace(l)?;
        let trig = trig_term(&eps, l)?;
        Ok((-2.0 * l * t + 2.0 * l * trig) * (f64::from(model.genus) - 1.0))
    };
    let near_positive = lambda.re > 0.0 && near_lattice_loose(lambda);
    let value = if near_positive {
        let mut sum = Complex64::new(0.0, 0.0);
        let nodes = 64;
        for j in 0..nodes {
            let w = Complex64::from_polar(1e-3, 2.0 * PI * j as f64 / nodes as f64);
            sum += raw(lambda + w)?;
        }
        sum / nodes as f64
    } else {
        if lambda.re < 0.0 && near_lattice(lambda, 0.5) {
            return Err(Error::PoleHit(format!("{lambda}")));
        }
        raw(lambda)?
    };
    Ok(value + model.c0 + model.c1 * lambda)
}

fn near_lattice_loose(x: Complex64) -> bool {
    let shifted = x.re - 0.5;
    x.im.abs() < 1e-6 && (shifted - shifted.round()).abs() < 1e-6
}

/// `Σ_μ 2λ m / (λ² − (1/4 − μ)) + Id(λ)`: simple poles at the divisor points
/// with residue equal to their order.
pub fn model_log_derivative(
    model: &IdentityTermModel,
    spec: &LaplaceSpectrum,
    lambda: Complex64,
) -> Result<Complex64> {
    let mut sum = identity_term(model, lambda)?;
    for &(mu, m) in spec.entries() {
        let den = lambda * lambda - (0.25 - mu);
        if den.norm() < POLE_TOL {
            return Err(Error::PoleHit(format!("{lambda}")));
        }
        sum += 2.0 * lambda * f64::from(m) / den;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub c0: f64,
    pub c1: f64,
    /// Root-mean-square misfit over the samples.
    pub residual: f64,
}

/// Least-squares `c0 + c1 λ ≈ target` with real `c0, c1` over complex data.
pub fn fit_affine(points: &[Complex64], targets: &[Complex64]) -> Result<Calibration> {
    if points.len() < 2 || points.len() != targets.len() {
        return Err(Error::InsufficientSamples(points.len().min(targets.len())));
    }
    // rows (1, Re λ) → Re target and (0, Im λ) → Im target
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (l, t) in points.iter().zip(targets) {
        s11 += 1.0;
        s12 += l.re;
        s22 += l.re * l.re + l.im * l.im;
        r1 += t.re;
        r2 += l.re * t.re + l.im * t.im;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() <= 1e-14 * s11 * s22 {
        return Err(Error::InvalidInput(
            "sample points do not determine an affine fit".into(),
        ));
    }
    let c0 = (s22 * r1 - s12 * r2) / det;
    let c1 = (s11 * r2 - s12 * r1) / det;
    let sq: f64 = points
        .iter()
        .zip(targets)
        .map(|(l, t)| (t - (c0 + c1 * l)).norm_sqr())
        .sum();
    Ok(Calibration {
        c0,
        c1,
        residual: (sq / points.len() as f64).sqrt(),
    })
}

/// Fits `c0, c1` so that `Id` matches `observed(λ) − 2λ/(λ² − 1/4)` on the
/// samples, where `observed` is a log-derivative evaluator.
pub fn calibrate_with<F>(
    model: &IdentityTermModel,
    samples: &[Complex64],
    observed: F,
) -> Result<Calibration>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples(samples.len()));
    }
    let base = IdentityTermModel {
        c0: 0.0,
        c1: 0.0,
        ..*model
    };
    let targets: Vec<Complex64> = samples
        .par_iter()
        .map(|&l| {
            let constants = 2.0 * l / (l * l - 0.25);
            Ok(observed(l)? - constants - identity_term(&base, l)?)
        })
        .collect::<Result<_>>()?;
    fit_affine(samples, &targets)
}

/// Fits `c0, c1` against the geodesic log-derivative of a length spectrum
/// at sample points with `Re λ >= 2`. The residual is reported, not
/// asserted: the model keeps only the constant eigenfunction.
pub fn calibrate(
    model: &IdentityTermModel,
    spec: &LengthSpectrum,
    samples: &[Complex64],
    k_max: u32,
) -> Result<Calibration> {
    if let Some(bad) = samples.iter().find(|l| l.re < 2.0) {
        return Err(Error::InvalidInput(format!(
            "calibration samples need Re(lambda) >= 2, got {bad}"
        )));
    }
    let prec = spec.precision;
    calibrate_with(model, samples, |l| {
        let lam = BigComplex::new(
            Float::with_val(prec.bits(), l.re),
            Float::with_val(prec.bits(), l.im),
        );
        Ok(log_derivative(spec, SigmaParam::Trivial, &lam, k_max)?
            .value
            .to_c64())
    })
}
