//! Primitivity of a single element.

use rug::Float;

use super::ball::enumerate_ball;
use super::mat::Mat2;
use super::spectrum::length_spectrum;
use super::FuchsianGroup;
use crate::error::{Error, Result};
use crate::hyperbolic::translation_length;

/// The systole of the group, from the length spectrum up to the shortest
/// generator length.
pub fn systole(group: &FuchsianGroup) -> Result<Float> {
    let shortest = group
        .generators()
        .iter()
        .map(translation_length)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by(|a, b| a.partial_cmp(b).expect("lengths are finite"))
        .ok_or_else(|| Error::InvalidInput("no generators".into()))?;
    let cutoff = Float::with_val(shortest.prec(), &shortest + 1e-9);
    let spec = length_spectrum(group, &cutoff, None)?;
    spec.systole().cloned().ok_or_else(|| {
        Error::FundamentalDomain("no closed geodesic below the shortest generator".into())
    })
}

/// Whether `γ` is not a proper power `δⁿ`, `n >= 2`, of an element of the group.
///
/// A root `δ` has the same axis as `γ` and `ℓ(δ) = ℓ(γ)/n`, so it moves `i` no
/// further than `γ` does. The search looks for roots in the word ball of the
/// given radius. `true` is returned only when it is certified: either
/// `ℓ(γ)/2` is below the systole, or the ball provably contains every element
/// moving `i` by at most `d(i, γ·i)`.
pub fn is_primitive(
    gamma: &crate::hyperbolic::GroupElement,
    group: &FuchsianGroup,
    search_radius: usize,
) -> Result<bool> {
    let ell = translation_length(gamma)?;
    let ell_f = ell.to_f64();
    let prec = group.precision();
    let sys = systole(group)?;
    if Float::with_val(prec.bits(), &ell / 2u32) < sys {
        return Ok(true);
    }
    let ball = enumerate_ball(group, search_radius)?;
    let disp = Mat2(gamma.to_f64()).displacement();
    let scale = 1.0 + Mat2(gamma.to_f64()).cosh_displacement();
    let tol = prec.dedup_tol().to_f64() * scale;
    let max_n = (ell_f / sys.to_f64()).floor() as u32;
    for delta in &ball.elements[1..] {
        let d_ell = Mat2(delta.to_f64()).translation_length();
        for n in 2..=max_n {
            if (d_ell * f64::from(n) - ell_f).abs() > 1e-6 * (1.0 + ell_f) {
                continue;
            }
            let power = delta.pow(n);
            if power.projective_distance(gamma).to_f64() < tol {
                return Ok(false);
            }
        }
    }
    if disp <= ball.certified_displacement(group)? {
        Ok(true)
    } else {
        Err(Error::InconclusivePrimitivity {
            radius: search_radius,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::bolza_group;
    use crate::precision::Precision;

    #[test]
    fn systole_is_the_generator_length() {
        let g = bolza_group(Precision::default());
        let s = systole(&g).unwrap();
        let expected = translation_length(&g.generators()[0]).unwrap();
        assert!((s - expected).abs().to_f64() < 1e-30);
    }

    #[test]
    fn generator_is_primitive_and_its_square_is_not() {
        let g = bolza_group(Precision::default());
        let g0 = g.generators()[0].clone();
        assert!(is_primitive(&g0, &g, 1).unwrap());
        assert!(!is_primitive(&g0.pow(2), &g, 2).unwrap());
        assert!(!is_primitive(&g0.inverse().pow(3), &g, 2).unwrap());
    }
}
