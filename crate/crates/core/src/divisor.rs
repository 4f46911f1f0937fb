//! The divisor of `Z(Γ, 1, λ)` for a compact surface of genus `g`.
//!
//! Zeros come in two families. Each Laplace eigenvalue `μ` of multiplicity
//! `m` gives zeros of order `m` at the two roots of `μ = 1/4 − λ²` (order
//! `2m` at `λ = 0` when `μ = 1/4`); these are real for `μ < 1/4` and purely
//! imaginary otherwise. The topological zeros sit at `λ = −(2n+1)/2` with
//! order `(2g − 2)(2n + 1)`. At `λ = −1/2` the constant eigenfunction adds
//! one more, giving `(2g − 2) + 1`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Two points closer than this are the same point of the divisor.
pub const POINT_TOL: f64 = 1e-9;

/// `μ(λ) = 1/4 − λ²`, the Casimir eigenvalue of the principal series at `λ`.
pub fn mu_of_lambda(lambda: Complex64) -> Complex64 {
    Complex64::new(0.25, 0.0) - lambda * lambda
}

/// Finitely many Laplace eigenvalues with multiplicities, declared complete
/// below `complete_below`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceSpectrum {
    entries: Vec<(f64, u32)>,
    complete_below: f64,
}

impl LaplaceSpectrum {
    /// Checks that eigenvalues are nonnegative, strictly increasing and start
    /// with the constants `(0, 1)`.
    pub fn new(entries: Vec<(f64, u32)>, complete_below: f64) -> Result<Self> {
        match entries.first() {
            Some(&(mu, 1)) if mu.abs() <= POINT_TOL => {}
            _ => {
                return Err(Error::InvalidInput(
                    "the spectrum must start with the constants (0, 1)".into(),
                ))
            }
        }
        for w in entries.windows(2) {
            if w[1].0 - w[0].0 <= POINT_TOL {
                return Err(Error::InvalidInput(format!(
                    "eigenvalues must be strictly increasing: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(mu, m)) = entries
            .iter()
            .find(|e| !e.0.is_finite() || e.0 < 0.0 || e.1 == 0)
        {
            return Err(Error::InvalidInput(format!("bad entry mu {mu} mult {m}")));
        }
        if complete_below.is_nan() || complete_below <= 0.0 {
            return Err(Error::InvalidInput(
                "complete_below must be positive".into(),
            ));
        }
        let mut entries = entries;
        entries[0].0 = 0.0;
        Ok(Self {
            entries,
            complete_below,
        })
    }

    /// Just the constants.
    pub fn constants_only(complete_below: f64) -> Self {
        Self::new(vec![(0.0, 1)], complete_below).expect("valid")
    }

    pub fn entries(&self) -> &[(f64, u32)] {
        &self.entries
    }

    pub fn complete_below(&self) -> f64 {
        self.complete_below
    }

    /// Multiplicity of `μ` (0 if absent).
    pub fn multiplicity(&self, mu: f64) -> u32 {
        self.entries
            .iter()
            .find(|e| (e.0 - mu).abs() <= POINT_TOL * (1.0 + mu.abs()))
            .map_or(0, |e| e.1)
    }

    /// Reads `# complete_below <x>` and `mu <x> mult <n>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut complete_below = None;
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let perr = |message: String| Error::Parse {
                line: n + 1,
                message,
            };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                if parts.next() == Some("complete_below") {
                    complete_below = Some(
                        parts
                            .next()
                            .and_then(|x| x.parse::<f64>().ok())
                            .ok_or_else(|| perr("bad complete_below".into()))?,
                    );
                }
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "mu" || parts[2] != "mult" {
                return Err(perr(format!("expected `mu <x> mult <n>`, got `{line}`")));
            }
            let mu = parts[1]
                .parse::<f64>()
                .map_err(|_| perr(format!("bad eigenvalue `{}`", parts[1])))?;
            let mult = parts[3]
                .parse::<u32>()
                .map_err(|_| perr(format!("bad multiplicity `{}`", parts[3])))?;
            entries.push((mu, mult));
        }
        let complete_below = complete_below.ok_or(Error::Parse {
            line: 0,
            message: "missing `# complete_below` header".into(),
        })?;
        Self::new(entries, complete_below)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("# complete_below {}\n", self.complete_below);
        for (mu, m) in &self.entries {
            let _ = writeln!(out, "mu {mu} mult {m}");
        }
        out
    }
}

/// Integer orders at finitely many points of `ℂ`, sorted by `(Re, Im)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Divisor {
    points: Vec<(Complex64, i64)>,
}

fn same_point(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= POINT_TOL
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `order` at `lambda`; points whose order becomes 0 are dropped.
    pub fn add(&mut self, lambda: Complex64, order: i64) {
        if let Some(k) = self.points.iter().position(|p| same_point(p.0, lambda)) {
            self.points[k].1 += order;
            if self.points[k].1 == 0 {
                self.points.remove(k);
            }
        } else if order != 0 {
            self.points.push((lambda, order));
            self.points
                .sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
        }
    }

    pub fn sum(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for &(z, d) in &other.points {
            out.add(z, d);
        }
        out
    }

    pub fn points(&self) -> &[(Complex64, i64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn order_at(&self, lambda: Complex64) -> i64 {
        self.points
            .iter()
            .find(|p| same_point(p.0, lambda))
            .map_or(0, |p| p.1)
    }

    /// `lambda_re <x> lambda_im <y> ord <d>` per point.
    pub fn to_file_string(&self) -> String {
        let clean = |x: f64| if x == 0.0 { 0.0 } else { x };
        let mut out = String::new();
        for (z, d) in &self.points {
            let _ = writeln!(
                out,
                "lambda_re {} lambda_im {} ord {d}",
                clean(z.re),
                clean(z.im)
            );
        }
        out
    }
}

/// Zeros at `±√(1/4 − μ)` of order `m` for every eigenvalue.
pub fn spectral_divisor(spec: &LaplaceSpectrum) -> Divisor {
    let mut d = Divisor::new();
    for &(mu, m) in spec.entries() {
        let m = i64::from(m);
        let s = 0.25 - mu;
        if s.abs() <= POINT_TOL {
            d.add(Complex64::new(0.0, 0.0), 2 * m);
        } else if s > 0.0 {
            d.add(Complex64::new(s.sqrt(), 0.0), m);
            d.add(Complex64::new(-s.sqrt(), 0.0), m);
        } else {
            d.add(Complex64::new(0.0, (-s).sqrt()), m);
            d.add(Complex64::new(0.0, -(-s).sqrt()), m);
        }
    }
    d
}

fn check_genus(g: u32) -> Result<()> {
    if g < 2 {
        Err(Error::InvalidInput(format!("genus must be >= 2, got {g}")))
    } else {
        Ok(())
    }
}

/// Order of the topological zero at `λ = −(2n+1)/2`.
pub fn trivial_order(g: u32, n: u32) -> i64 {
    (2 * i64::from(g) - 2) * (2 * i64::from(n) + 1)
}

/// Zeros at `−(2n+1)/2` of order `(2g−2)(2n+1)` for `(2n+1)/2 <= bound`.
pub fn trivial_divisor(g: u32, lambda_bound: f64) -> Result<Divisor> {
    check_genus(g)?;
    let mut d = Divisor::new();
    let mut n = 0u32;
    while f64::from(2 * n + 1) / 2.0 <= lambda_bound + POINT_TOL {
        d.add(
            Complex64::new(-f64::from(2 * n + 1) / 2.0, 0.0),
            trivial_order(g, n),
        );
        n += 1;
    }
    Ok(d)
}

/// Spectral plus topological zeros with `|λ| <= lambda_bound`.
pub fn full_divisor(g: u32, spec: &LaplaceSpectrum, lambda_bound: f64) -> Result<Divisor> {
    let mut d = trivial_divisor(g, lambda_bound)?;
    for &(z, m) in spectral_divisor(spec).points() {
        if z.norm() <= lambda_bound + POINT_TOL {
            d.add(z, m);
        }
    }
    Ok(d)
}

/// `vol(Y) / vol(S²) = 4π(g − 1) / 4π`.
pub fn volume_ratio(g: u32) -> Result<u32> {
    check_genus(g)?;
    Ok(g - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_of_lambda(c(0.5, 0.0)), c(0.0, 0.0));
        assert_eq!(mu_of_lambda(c(0.0, 0.0)), c(0.25, 0.0));
        assert_eq!(mu_of_lambda(c(1.5, 0.0)), c(-2.0, 0.0));
    }

    #[test]
    fn spectral_examples() {
        let d = spectral_divisor(&LaplaceSpectrum::constants_only(10.0));
        assert_eq!(d.order_at(c(0.5, 0.0)), 1);
        assert_eq!(d.order_at(c(-0.5, 0.0)), 1);
        assert_eq!(d.len(), 2);

        let s = LaplaceSpectrum::new(vec![(0.0, 1), (2.0, 3)], 10.0).unwrap();
        let d = spectral_divisor(&s);
        let y = 7f64.sqrt() / 2.0;
        assert_eq!(d.order_at(c(0.0, y)), 3);
        assert_eq!(d.order_at(c(0.0, -y)), 3);

        let s = LaplaceSpectrum::new(vec![(0.0, 1), (0.25, 5)], 10.0).unwrap();
        assert_eq!(spectral_divisor(&s).order_at(c(0.0, 0.0)), 10);
    }

    #[test]
    fn trivial_examples() {
        let d = trivial_divisor(2, 10.0).unwrap();
        assert_eq!(d.order_at(c(-2.5, 0.0)), 10);
        assert_eq!(d.order_at(c(-0.5, 0.0)), 2);
        assert_eq!(trivial_divisor(3, 10.0).unwrap().order_at(c(-1.5, 0.0)), 12);
        assert!(d.points().iter().all(|p| p.0.re < 0.0));
        assert!(trivial_divisor(1, 3.0).is_err());
    }

    #[test]
    fn full_examples() {
        let d = full_divisor(2, &LaplaceSpectrum::constants_only(10.0), 10.0).unwrap();
        assert_eq!(d.order_at(c(-0.5, 0.0)), 3);
        assert_eq!(d.order_at(c(0.5, 0.0)), 1);
        assert_eq!(d.order_at(c(1.5, 0.0)), 0);
        assert!(d.points().iter().all(|p| p.1 > 0));
    }

    #[test]
    fn volume_ratio_examples() {
        assert_eq!(volume_ratio(2).unwrap(), 1);
        assert_eq!(volume_ratio(5).unwrap(), 4);
        for g in 2..20 {
            assert_eq!(2 * i64::from(volume_ratio(g).unwrap()), trivial_order(g, 0));
        }
    }

    #[test]
    fn spectrum_validation_and_files() {
        assert!(LaplaceSpectrum::new(vec![(1.0, 1)], 5.0).is_err());
        assert!(LaplaceSpectrum::new(vec![(0.0, 1), (3.0, 1), (2.0, 1)], 5.0).is_err());
        assert!(LaplaceSpectrum::new(vec![(0.0, 1), (2.0, 0)], 5.0).is_err());
        let s = LaplaceSpectrum::new(vec![(0.0, 1), (0.1875, 2), (3.5, 1)], 8.0).unwrap();
        let back = LaplaceSpectrum::parse(&s.to_file_string()).unwrap();
        assert_eq!(back, s);
        assert!(LaplaceSpectrum::parse("mu 0 mult 1\n").is_err());
    }

    #[test]
    fn divisor_file_format() {
        let d = full_divisor(2, &LaplaceSpectrum::constants_only(1.0), 1.0).unwrap();
        assert_eq!(
            d.to_file_string(),
            "lambda_re -0.5 lambda_im 0 ord 3\nlambda_re 0.5 lambda_im 0 ord 1\n"
        );
    }
}
