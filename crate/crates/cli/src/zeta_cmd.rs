//! Zeta values and logarithmic derivatives at a single point.

use num_complex::Complex64;
use selberg_core::precision::format_decimal;
use selberg_core::zeta::{log_derivative, zeta, SigmaParam};
use selberg_core::BigComplex;

use crate::args::ZetaMode;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::spectrum_cmd::ensure_spectrum;

/// Significant digits printed for the value.
const OUTPUT_DIGITS: u32 = 20;

/// Accepts `a`, `bi`, `a+bi` and `a-bi` (also with `j`).
pub fn parse_lambda(text: &str) -> CliResult<Complex64> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let z: Complex64 = cleaned
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse lambda `{text}`")))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(CliError::Config(format!("lambda `{text}` is not finite")));
    }
    Ok(z)
}

pub fn run(cfg: &RunConfig, lambda: &str, mode: ZetaMode, sigma: &str) -> CliResult<()> {
    let z = parse_lambda(lambda)?;
    let sigma: SigmaParam = sigma.parse()?;
    let cached = ensure_spectrum(cfg)?;
    let spec = &cached.spectrum;
    let lam = BigComplex::from_c64(spec.precision, z);
    let out = match mode {
        ZetaMode::Value => zeta(spec, sigma, &lam, cfg.k_max)?,
        ZetaMode::Logderiv => log_derivative(spec, sigma, &lam, cfg.k_max)?,
    };
    println!(
        "lambda {} {} value {} {} err {:.3e}",
        z.re,
        z.im,
        format_decimal(&out.value.re, OUTPUT_DIGITS),
        format_decimal(&out.value.im, OUTPUT_DIGITS),
        out.truncation_bound + out.tail_estimate
    );
    Ok(())
}
