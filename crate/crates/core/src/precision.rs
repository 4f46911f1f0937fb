//! Working precision and the tolerances derived from it.
//!
//! Every tolerance used for equality decisions in the crate is computed here
//! from the decimal precision, so that raising the precision tightens all of
//! them consistently.

use rug::ops::Pow;
use rug::Float;

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 40;

/// Smallest precision accepted by the CLI configuration.
pub const MIN_DIGITS: u32 = 20;

/// Extra binary digits carried beyond the requested decimal precision.
const GUARD_BITS: u32 = 24;

/// Decimal working precision plus the derived binary precision and tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Self::new(DEFAULT_DIGITS)
    }
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        assert!(
            digits >= 10,
            "precision below 10 digits is meaningless here"
        );
        Self { digits }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision for `rug::Float`, including guard bits.
    pub fn bits(&self) -> u32 {
        // log2(10) = 3.3219...
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// The same precision raised by `extra` decimal digits.
    pub fn escalated(&self, extra: u32) -> Self {
        Self::new(self.digits + extra)
    }

    /// Boundary tolerance 10^(-digits+8) used by element classification and
    /// determinant checks.
    pub fn classify_tol(&self) -> Float {
        self.pow10(-(self.digits as i32) + 8)
    }

    /// Deduplication / merge tolerance 10^(-digits/2).
    pub fn dedup_tol(&self) -> Float {
        self.pow10(-((self.digits / 2) as i32))
    }

    pub fn pow10(&self, exp: i32) -> Float {
        let ten = Float::with_val(self.bits(), 10);
        Float::with_val(self.bits(), ten.pow(exp))
    }

    pub fn float(&self, value: f64) -> Float {
        Float::with_val(self.bits(), value)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits())
    }

    pub fn one(&self) -> Float {
        Float::with_val(self.bits(), 1)
    }

    /// Parses a decimal literal at this precision.
    pub fn parse(&self, text: &str) -> Option<Float> {
        Float::parse(text.trim())
            .ok()
            .map(|p| Float::with_val(self.bits(), p))
    }
}

/// Formats a float with `digits` significant decimal digits in plain
/// (non-exponent) notation when the magnitude allows it.
pub fn format_decimal(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(digits as usize));
    // rug renders as d.ddde±x; expand to plain notation for moderate exponents
    match s.split_once('e') {
        None => s,
        Some((mantissa, exp)) => {
            let exp: i64 = exp.parse().unwrap_or(0);
            if !(-30..=30).contains(&exp) {
                return s;
            }
            let (sign, mantissa) = match mantissa.strip_prefix('-') {
                Some(m) => ("-", m),
                None => ("", mantissa),
            };
            let digits_only: String = mantissa.chars().filter(|c| *c != '.').collect();
            let point = mantissa.find('.').unwrap_or(mantissa.len()) as i64 + exp;
            let body = if point <= 0 {
                format!("0.{}{}", "0".repeat((-point) as usize), digits_only)
            } else if point as usize >= digits_only.len() {
                format!(
                    "{}{}",
                    digits_only,
                    "0".repeat(point as usize - digits_only.len())
                )
            } else {
                let (a, b) = digits_only.split_at(point as usize);
                format!("{a}.{b}")
            };
            format!("{sign}{body}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_cover_digits() {
        let p = Precision::new(40);
        assert!(p.bits() >= 133 + GUARD_BITS);
        assert!(p.escalated(10).bits() > p.bits());
    }

    #[test]
    fn tolerances_scale_with_precision() {
        let p = Precision::new(40);
        let tol = p.classify_tol().to_f64();
        assert!((tol / 1e-32 - 1.0).abs() < 1e-12);
        let dedup = p.dedup_tol().to_f64();
        assert!((dedup / 1e-20 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decimal_formatting_is_plain() {
        let p = Precision::new(30);
        let x = p.parse("3.25").unwrap();
        assert_eq!(format_decimal(&x, 5), "3.2500");
        let y = p.parse("-0.00125").unwrap();
        assert_eq!(format_decimal(&y, 3), "-0.00125");
        let z = p.parse("1250").unwrap();
        assert_eq!(format_decimal(&z, 6), "1250.00");
        assert_eq!(format_decimal(&p.zero(), 6), "0");
    }
}
