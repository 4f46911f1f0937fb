//! Local factors, the truncated Selberg product and its logarithmic
//! derivative in the half-plane of absolute convergence `Re λ > 1/2`.
//!
//! For `γ` conjugate to `m_γ a_γ` with `a_γ = diag(t^{1/2}, t^{-1/2})`,
//! `t = e^ℓ`, the local factor is
//!
//! ```text
//! Z(γ, σ, λ) = ∏_{k>=0} det(1 − σ(m_γ) a_γ^{−(λ+ρ)} ⊗ S^k(Ad(m_γ a_γ)|n̄)),
//! ```
//!
//! which for SL(2,R) (`ρ = 1/2`, `Ad(a_γ)|n̄ = t^{-1}`, `Ad(−I)|n̄ = 1`) is
//! `∏_k (1 − σ(m_γ) t^{−λ−k−1/2})`. The product over `k` is truncated at `K`;
//! with `|log(1 − z)| <= 2|z|` for `|z| <= 1/2` the discarded factors change
//! the logarithm by at most `2 t^{−Re λ−K−3/2} / (1 − t^{−1})`.
//!
//! Sums over geodesics are computed term by term in parallel, then added in
//! spectrum order with compensated summation, so results do not depend on the
//! number of worker threads.

use rayon::prelude::*;
use rug::Float;

use crate::complex::{BigComplex, CompensatedSum};
use crate::error::{Error, Result};
use crate::fuchsian::LengthSpectrum;

/// Truncation bounds above this are refused.
pub const MAX_TAIL_BOUND: f64 = 1e-3;

/// Distance from the abscissa of convergence that evaluations must keep.
pub const CONVERGENCE_MARGIN: f64 = 0.01;

/// The two characters of `M = {±I}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SigmaParam {
    Trivial,
    Theta,
}

impl SigmaParam {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Trivial => "trivial",
            Self::Theta => "theta",
        }
    }

    /// `σ(−I)`.
    pub fn sign_on_minus_i(&self) -> i8 {
        match self {
            Self::Trivial => 1,
            Self::Theta => -1,
        }
    }

    /// `σ(m)` for `m = m_sign · I`.
    pub fn value_at(&self, m_sign: i8) -> i8 {
        if m_sign < 0 {
            self.sign_on_minus_i()
        } else {
            1
        }
    }
}

impl std::str::FromStr for SigmaParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" | "1" => Ok(Self::Trivial),
            "theta" => Ok(Self::Theta),
            other => Err(Error::InvalidInput(format!("unknown sigma `{other}`"))),
        }
    }
}

/// A truncated product or sum with the bound on what the truncation in `k`
/// discarded, as an absolute bound on the logarithm.
#[derive(Debug, Clone)]
pub struct Truncated {
    pub value: BigComplex,
    pub tail_bound: f64,
}

/// Input of the general determinant formula.
#[derive(Debug, Clone)]
pub struct GeneralLocalFactorInput {
    /// `σ(m_γ)`, a square matrix.
    pub sigma_matrix: Vec<Vec<BigComplex>>,
    /// `a_γ^ρ > 1`.
    pub a_rho: Float,
    /// Eigenvalues of `Ad(m_γ a_γ)` on `n̄`, all of modulus below 1.
    pub ad_eigenvalues: Vec<BigComplex>,
}

impl GeneralLocalFactorInput {
    /// The SL(2,R) element with `t = e^ℓ` and class sign `m_sign`.
    pub fn sl2(t: &Float, m_sign: i8, sigma: SigmaParam) -> Self {
        let p = t.prec();
        let s = f64::from(sigma.value_at(m_sign));
        Self {
            sigma_matrix: vec![vec![BigComplex::from_real(Float::with_val(p, s))]],
            a_rho: Float::with_val(p, t.sqrt_ref()),
            ad_eigenvalues: vec![BigComplex::from_real(Float::with_val(p, t.recip_ref()))],
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.sigma_matrix.len();
        if d == 0 || self.sigma_matrix.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidInput(
                "sigma_matrix must be square and nonempty".into(),
            ));
        }
        if self.a_rho <= 1 {
            return Err(Error::InvalidInput("a_rho must exceed 1".into()));
        }
        if self.ad_eigenvalues.iter().any(|e| e.abs() >= 1) {
            return Err(Error::InvalidInput(
                "ad eigenvalues must have modulus < 1".into(),
            ));
        }
        Ok(())
    }
}

fn check_truncation(lambda: &BigComplex, k_max: u32) -> Result<()> {
    if lambda.re.to_f64() <= -f64::from(k_max) {
        return Err(Error::InvalidInput(format!(
            "Re(lambda) = {} must exceed -K = -{k_max}",
            lambda.re.to_f64()
        )));
    }
    Ok(())
}

fn check_tail(bound: f64) -> Result<()> {
    if bound.is_nan() || bound > MAX_TAIL_BOUND {
        Err(Error::DivergentTail { bound })
    } else {
        Ok(())
    }
}

/// `2 t^{−Re λ−K−3/2} / (1 − t^{−1})`, or infinity when a kept factor is not
/// small enough for the logarithm estimate to apply.
fn sl2_tail_bound(ell: f64, re_lambda: f64, k_max: u32) -> f64 {
    let first = (-(re_lambda + f64::from(k_max) + 1.5) * ell).exp();
    if first > 0.5 {
        return f64::INFINITY;
    }
    2.0 * first / (1.0 - (-ell).exp())
}

/// The truncated factor `∏_{k=0}^{K} (1 − ε t^{−λ−k−1/2})`, `ε = σ(m_γ)`,
/// without the tail check.
pub fn local_factor_sl2_unchecked(
    t: &Float,
    m_sign: i8,
    sigma: SigmaParam,
    lambda: &BigComplex,
    k_max: u32,
) -> Truncated {
    let p = lambda.prec();
    let ell = Float::with_val(p, t.ln_ref());
    let eps = sigma.value_at(m_sign);
    let inv_t = Float::with_val(p, t.recip_ref());
    // x_0 = t^{−λ−1/2}
    let half = Float::with_val(p, 0.5);
    let shifted = BigComplex::new(Float::with_val(p, &lambda.re + &half), lambda.im.clone());
    let mut x = (-&shifted.scale(&ell)).exp();
    let one = BigComplex::from_real(Float::with_val(p, 1));
    let mut acc = one.clone();
    for _ in 0..=k_max {
        let factor = if eps > 0 { &one - &x } else { &one + &x };
        acc = &acc * &factor;
        x = x.scale(&inv_t);
    }
    Truncated {
        value: acc,
        tail_bound: sl2_tail_bound(ell.to_f64(), lambda.re.to_f64(), k_max),
    }
}

/// `Z(γ, σ, λ)` for SL(2,R), truncated after `k = K`.
pub fn local_factor_sl2(
    t: &Float,
    m_sign: i8,
    sigma: SigmaParam,
    lambda: &BigComplex,
    k_max: u32,
) -> Result<Truncated> {
    if *t <= 1 {
        return Err(Error::InvalidInput("t must exceed 1".into()));
    }
    check_truncation(lambda, k_max)?;
    let out = local_factor_sl2_unchecked(t, m_sign, sigma, lambda, k_max);
    check_tail(out.tail_bound)?;
    Ok(out)
}

/// Monomials of degree `k` in `vars`, one per multiset of indices.
fn monomials(vars: &[BigComplex], k: u32, one: &BigComplex) -> Vec<BigComplex> {
    fn rec(vars: &[BigComplex], k: u32, start: usize, acc: BigComplex, out: &mut Vec<BigComplex>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..vars.len() {
            rec(vars, k - 1, i, &acc * &vars[i], out);
        }
    }
    let mut out = Vec::new();
    rec(vars, k, 0, one.clone(), &mut out);
    out
}

/// Determinant by Gaussian elimination with partial pivoting.
fn det(mut m: Vec<Vec<BigComplex>>) -> BigComplex {
    let n = m.len();
    let p = m[0][0].prec();
    let mut d = BigComplex::from_real(Float::with_val(p, 1));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                m[a][col]
                    .norm_sqr()
                    .partial_cmp(&m[b][col].norm_sqr())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty range");
        if m[pivot][col].norm_sqr().is_zero() {
            return BigComplex::from_real(Float::with_val(p, 0));
        }
        if pivot != col {
            m.swap(pivot, col);
            d = -&d;
        }
        d = &d * &m[col][col];
        let inv = m[col][col].recip();
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower.iter_mut() {
            let f = &row[col] * &inv;
            for (dst, src) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *dst = &*dst - &(&f * src);
            }
        }
    }
    d
}

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The truncated determinant product without the tail check.
pub fn local_factor_general_unchecked(
    input: &GeneralLocalFactorInput,
    lambda: &BigComplex,
    rho: &Float,
    k_max: u32,
) -> Result<Truncated> {
    input.validate()?;
    let p = lambda.prec();
    let d = input.sigma_matrix.len();
    // scalar a^{−(λ+ρ)} = (a^ρ)^{−(λ+ρ)/ρ}
    let ln_a_rho = Float::with_val(p, input.a_rho.ln_ref());
    let exponent = BigComplex::new(
        Float::with_val(p, -Float::with_val(p, &lambda.re + rho)) / rho,
        Float::with_val(p, -&lambda.im) / rho,
    );
    let scalar = BigComplex::real_base_pow(&ln_a_rho, &exponent);
    let one = BigComplex::from_real(Float::with_val(p, 1));
    let mut acc = one.clone();
    for k in 0..=k_max {
        for mono in monomials(&input.ad_eigenvalues, k, &one) {
            let c = &scalar * &mono;
            let m: Vec<Vec<BigComplex>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let s = &c * &input.sigma_matrix[i][j];
                            if i == j {
                                &one - &s
                            } else {
                                -&s
                            }
                        })
                        .collect()
                })
                .collect();
            acc = &acc * &det(m);
        }
    }

    let sigma_norm = input
        .sigma_matrix
        .iter()
        .map(|row| row.iter().map(|x| x.abs().to_f64()).sum::<f64>())
        .fold(0.0, f64::max);
    let q = input
        .ad_eigenvalues
        .iter()
        .map(|e| e.abs().to_f64())
        .fold(0.0, f64::max);
    let c0 = scalar.abs().to_f64() * sigma_norm;
    let n = input.ad_eigenvalues.len() as u64;
    let mut bound = 0.0;
    let mut k = u64::from(k_max) + 1;
    loop {
        let count = if n == 0 { 0.0 } else { binomial(n + k - 1, k) };
        let term = count * c0 * q.powi(k as i32);
        if c0 * q.powi(k as i32) > 0.5 && count > 0.0 {
            bound = f64::INFINITY;
            break;
        }
        bound += 2.0 * d as f64 * term;
        if term <= bound * 1e-17 || term == 0.0 || k > u64::from(k_max) + 100_000 {
            break;
        }
        k += 1;
    }
    Ok(Truncated {
        value: acc,
        tail_bound: bound,
    })
}

/// `∏_{k<=K} det(1 − σ(m) a^{−(λ+ρ)} ⊗ S^k(Ad|n̄))` on user-supplied data.
pub fn local_factor_general(
    input: &GeneralLocalFactorInput,
    lambda: &BigComplex,
    rho: &Float,
    k_max: u32,
) -> Result<Truncated> {
    check_truncation(lambda, k_max)?;
    let out = local_factor_general_unchecked(input, lambda, rho, k_max)?;
    check_tail(out.tail_bound)?;
    Ok(out)
}

/// A value computed from a finite spectrum.
#[derive(Debug, Clone)]
pub struct ZetaValue {
    pub value: BigComplex,
    /// Rigorous bound on the effect of truncating each local factor at `K`.
    pub truncation_bound: f64,
    /// Heuristic estimate of the contribution of geodesics beyond the
    /// spectrum cutoff, from the growth `e^L/L` of the prime geodesic count.
    /// An estimate, not a bound.
    pub tail_estimate: f64,
}

fn check_convergence(lambda: &BigComplex) -> Result<()> {
    let re = lambda.re.to_f64();
    if re <= 0.5 + CONVERGENCE_MARGIN {
        return Err(Error::OutsideConvergence {
            re,
            margin: CONVERGENCE_MARGIN,
        });
    }
    Ok(())
}

/// `∫_L^∞ e^{−ℓ(Re λ − 1/2)} w(ℓ) dℓ` with `w = 1/ℓ` (log Z) or `w = 1` (L).
fn tail_estimate(spec: &LengthSpectrum, lambda: &BigComplex, weighted: bool) -> f64 {
    let s = lambda.re.to_f64() - 0.5;
    let l = spec.cutoff.to_f64();
    let base = (-l * s).exp() / s;
    if weighted {
        base
    } else {
        base / l
    }
}

fn lambda_at(spec: &LengthSpectrum, lambda: &BigComplex) -> BigComplex {
    let bits = spec.precision.bits();
    BigComplex::new(
        Float::with_val(bits, &lambda.re),
        Float::with_val(bits, &lambda.im),
    )
}

/// Per-geodesic terms, in spectrum order.
fn per_geodesic<F>(spec: &LengthSpectrum, f: F) -> Result<Vec<(BigComplex, f64)>>
where
    F: Fn(&Float, i8) -> Result<(BigComplex, f64)> + Sync,
{
    spec.geodesics
        .par_iter()
        .map(|g| {
            let (v, b) = f(&g.length, g.m_sign)?;
            Ok((v, b * f64::from(g.multiplicity)))
        })
        .collect()
}

/// `Z(Γ, σ, λ) = ∏_γ Z(γ, σ, λ)^{mult}` over the spectrum.
pub fn zeta(
    spec: &LengthSpectrum,
    sigma: SigmaParam,
    lambda: &BigComplex,
    k_max: u32,
) -> Result<ZetaValue> {
    check_convergence(lambda)?;
    let lambda = lambda_at(spec, lambda);
    let p = lambda.prec();
    let terms = per_geodesic(spec, |ell, m| {
        let t = Float::with_val(p, ell.exp_ref());
        let f = local_factor_sl2(&t, m, sigma, &lambda, k_max)?;
        Ok((f.value, f.tail_bound))
    })?;
    let mut acc = BigComplex::from_real(Float::with_val(p, 1));
    let mut bound = 0.0;
    for ((v, b), g) in terms.iter().zip(&spec.geodesics) {
        for _ in 0..g.multiplicity {
            acc = &acc * v;
        }
        bound += b;
    }
    Ok(ZetaValue {
        value: acc,
        truncation_bound: bound,
        tail_estimate: tail_estimate(spec, &lambda, false),
    })
}

/// `Σ_γ mult · Σ_{k<=K} log(1 − ε t^{−λ−k−1/2})`, principal logarithms.
pub fn log_zeta(
    spec: &LengthSpectrum,
    sigma: SigmaParam,
    lambda: &BigComplex,
    k_max: u32,
) -> Result<ZetaValue> {
    check_convergence(lambda)?;
    check_truncation(lambda, k_max)?;
    let lambda = lambda_at(spec, lambda);
    let p = lambda.prec();
    let one = BigComplex::from_real(Float::with_val(p, 1));
    let terms = per_geodesic(spec, |ell, m| {
        let eps = sigma.value_at(m);
        let inv_t = Float::with_val(p, (-ell.clone()).exp());
        let shifted = BigComplex::new(Float::with_val(p, &lambda.re + 0.5), lambda.im.clone());
        let mut x = (-&shifted.scale(ell)).exp();
        let mut sum = CompensatedSum::new(spec.precision);
        for _ in 0..=k_max {
            let arg = if eps > 0 { &one - &x } else { &one + &x };
            sum.add(&arg.ln());
            x = x.scale(&inv_t);
        }
        let bound = sl2_tail_bound(ell.to_f64(), lambda.re.to_f64(), k_max);
        check_tail(bound)?;
        Ok((sum.value(), bound))
    })?;
    let mut total = CompensatedSum::new(spec.precision);
    let mut bound = 0.0;
    for ((v, b), g) in terms.iter().zip(&spec.geodesics) {
        total.add(&v.scale(&Float::with_val(p, g.multiplicity)));
        bound += b;
    }
    Ok(ZetaValue {
        value: total.value(),
        truncation_bound: bound,
        tail_estimate: tail_estimate(spec, &lambda, false),
    })
}

/// `L(Γ, σ, λ) = Z'/Z = Σ_γ mult · Σ_{k<=K} ε ℓ x_k / (1 − ε x_k)`,
/// `x_k = t^{−λ−k−1/2}`, the exact derivative of the truncated `log_zeta`.
pub fn log_derivative(
    spec: &LengthSpectrum,
    sigma: SigmaParam,
    lambda: &BigComplex,
    k_max: u32,
) -> Result<ZetaValue> {
    check_convergence(lambda)?;
    check_truncation(lambda, k_max)?;
    let lambda = lambda_at(spec, lambda);
    let p = lambda.prec();
    let one = BigComplex::from_real(Float::with_val(p, 1));
    let terms = per_geodesic(spec, |ell, m| {
        let eps = sigma.value_at(m);
        let inv_t = Float::with_val(p, (-ell.clone()).exp());
        let shifted = BigComplex::new(Float::with_val(p, &lambda.re + 0.5), lambda.im.clone());
        let mut x = (-&shifted.scale(ell)).exp();
        let mut sum = CompensatedSum::new(spec.precision);
        for _ in 0..=k_max {
            let (num, den) = if eps > 0 {
                (x.clone(), &one - &x)
            } else {
                (-&x, &one + &x)
            };
            sum.add(&num.div(&den).scale(ell));
            x = x.scale(&inv_t);
        }
        // d/dλ of the discarded logarithms is bounded by ℓ times their bound
        // up to the factor (k + 3/2)/(1 − |x|) ≤ 2(K + 2) here
        let b = sl2_tail_bound(ell.to_f64(), lambda.re.to_f64(), k_max);
        check_tail(b)?;
        Ok((
            sum.value(),
            b * ell.to_f64() * 2.0 * (f64::from(k_max) + 2.0),
        ))
    })?;
    let mut total = CompensatedSum::new(spec.precision);
    let mut bound = 0.0;
    for ((v, b), g) in terms.iter().zip(&spec.geodesics) {
        total.add(&v.scale(&Float::with_val(p, g.multiplicity)));
        bound += b;
    }
    Ok(ZetaValue {
        value: total.value(),
        truncation_bound: bound,
        tail_estimate: tail_estimate(spec, &lambda, true),
    })
}
