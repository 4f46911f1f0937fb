//! Dimensions of `H^i(Γ, ·)` for the principal series of SL(2,R) and its
//! constituents, and the Euler characteristics built from them.
//!
//! For `λ ∈ 1/2 + ℕ₀` the principal series `V = V^{−ω}` sits in
//! `0 → F_{2n+1} → V → D_{2n+1} → 0` (`F` finite-dimensional, `D` the sum of
//! the two discrete series); for `λ ∈ −1/2 − ℕ₀` the roles swap:
//! `0 → D → V → F → 0`. Elsewhere `V` is irreducible and its cohomology is
//! the kernel and cokernel of `Δ_Y − μ(λ)`.
//!
//! At `λ = −1/2` the exact sequence alone allows `dim H⁰ ∈ {2g, 2g + 1}`;
//! it is `2g` by unitarity: all invariants lie in the submodule `D_1`.

use std::fmt;

use num_complex::Complex64;

use crate::divisor::{full_divisor, mu_of_lambda, LaplaceSpectrum, POINT_TOL};
use crate::error::{Error, Result};

/// Where `λ` sits relative to the half-integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Generic,
    /// `λ = n + 1/2`, `n >= 1`.
    PosHalfInteger(u32),
    /// `λ = 1/2`.
    PlusHalf,
    /// `λ = −1/2`.
    NegHalf,
    /// `λ = −(2n+1)/2`, `n >= 1`.
    NegHalfInteger(u32),
}

impl Regime {
    /// The `n` with `|λ| = n + 1/2`, for the special regimes.
    pub fn n(&self) -> Option<u32> {
        match *self {
            Self::Generic => None,
            Self::PlusHalf | Self::NegHalf => Some(0),
            Self::PosHalfInteger(n) | Self::NegHalfInteger(n) => Some(n),
        }
    }

    pub fn is_positive_side(&self) -> bool {
        matches!(self, Self::PlusHalf | Self::PosHalfInteger(_))
    }

    /// The special regime with `|λ| = n + 1/2` on the given side.
    pub fn special(n: u32, positive: bool) -> Self {
        match (n, positive) {
            (0, true) => Self::PlusHalf,
            (0, false) => Self::NegHalf,
            (n, true) => Self::PosHalfInteger(n),
            (n, false) => Self::NegHalfInteger(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    pub lambda: Complex64,
    pub regime: Regime,
}

impl ParamPoint {
    /// Classifies `λ`; `λ = 0` is excluded.
    pub fn new(lambda: Complex64) -> Result<Self> {
        if lambda.norm() <= POINT_TOL {
            return Err(Error::UnsupportedLambda);
        }
        let regime = if lambda.im.abs() > POINT_TOL {
            Regime::Generic
        } else {
            let twice = 2.0 * lambda.re;
            let odd = twice.round();
            if (twice - odd).abs() > 2.0 * POINT_TOL || (odd as i64).rem_euclid(2) != 1 {
                Regime::Generic
            } else {
                let n = ((odd.abs() as u32) - 1) / 2;
                Regime::special(n, odd > 0.0)
            }
        };
        Ok(Self { lambda, regime })
    }

    /// Label used in tables: `-5/2` for special points, the value otherwise.
    pub fn label(&self) -> String {
        match self.regime.n() {
            Some(n) => {
                let sign = if self.regime.is_positive_side() {
                    ""
                } else {
                    "-"
                };
                format!("{sign}{}/2", 2 * n + 1)
            }
            None if self.lambda.im == 0.0 => format!("{}", self.lambda.re),
            None => format!("{}{:+}i", self.lambda.re, self.lambda.im),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    PosLambda,
    NegLambda,
}

/// Coefficients of the cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientModule {
    /// Hyperfunction vectors of the principal series.
    Hyperfunction,
    /// The `(2n+1)`-dimensional representation.
    Finite(u32),
    /// The discrete-series pair `D_{2n+1}`.
    Discrete(u32, Side),
}

impl CoefficientModule {
    pub fn letter(&self) -> char {
        match self {
            Self::Hyperfunction => 'V',
            Self::Finite(_) => 'F',
            Self::Discrete(..) => 'D',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyTable {
    pub module: CoefficientModule,
    /// `(dim H⁰, dim H¹, dim H²)`.
    pub dims: [u64; 3],
    pub genus: u32,
    pub lambda: Option<ParamPoint>,
}

impl CohomologyTable {
    pub fn chi(&self) -> i64 {
        self.dims[0] as i64 - self.dims[1] as i64 + self.dims[2] as i64
    }

    /// `χ' = Σ (−1)^p p dim H^p = −h1 + 2 h2`.
    pub fn chi_prime(&self) -> i64 {
        -(self.dims[1] as i64) + 2 * self.dims[2] as i64
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lambda = match (&self.lambda, self.module) {
            (Some(p), _) => p.label(),
            (None, CoefficientModule::Finite(n) | CoefficientModule::Discrete(n, _)) => {
                format!("pm{}/2", 2 * n + 1)
            }
            (None, CoefficientModule::Hyperfunction) => "-".into(),
        };
        write!(
            f,
            "g {} lambda {} module {} h0 {} h1 {} h2 {} chi {} chiprime {}",
            self.genus,
            lambda,
            self.module.letter(),
            self.dims[0],
            self.dims[1],
            self.dims[2],
            self.chi(),
            self.chi_prime()
        )
    }
}

/// `−χ'` of a table, the order it predicts for `Z` at its `λ`.
pub fn chi_prime(t: &CohomologyTable) -> i64 {
    t.chi_prime()
}

fn check_genus(g: u32) -> Result<()> {
    if g < 2 {
        Err(Error::InvalidInput(format!("genus must be >= 2, got {g}")))
    } else {
        Ok(())
    }
}

fn two_g_minus_two(g: u32) -> u64 {
    2 * u64::from(g) - 2
}

/// `dim H^i(Γ, V^{−ω})` at `λ`.
///
/// In the generic regime this is `(m, m, 0)` with `m` the multiplicity of
/// `μ(λ)` in the spectrum; a real `μ(λ)` at or above the completeness bound
/// is refused rather than guessed.
pub fn dims_hyperfunction(
    g: u32,
    lambda: Complex64,
    spec: &LaplaceSpectrum,
) -> Result<CohomologyTable> {
    check_genus(g)?;
    let point = ParamPoint::new(lambda)?;
    let k = two_g_minus_two(g);
    let g64 = u64::from(g);
    let dims = match point.regime {
        Regime::Generic => {
            let mu = mu_of_lambda(lambda);
            let m = if mu.im.abs() > POINT_TOL * (1.0 + mu.re.abs()) {
                // Δ_Y is self-adjoint: no eigenvalue off the real axis
                0
            } else if mu.re >= spec.complete_below() {
                return Err(Error::UnknownSpectralRegion {
                    mu: mu.re,
                    complete_below: spec.complete_below(),
                });
            } else {
                u64::from(spec.multiplicity(mu.re))
            };
            [m, m, 0]
        }
        Regime::PosHalfInteger(_) => [0, 0, 0],
        Regime::PlusHalf => [1, 1, 0],
        Regime::NegHalf => [2 * g64, 2 * g64 + 1, 1],
        Regime::NegHalfInteger(n) => {
            let d = u64::from(2 * n + 1) * k;
            [d, d, 0]
        }
    };
    Ok(CohomologyTable {
        module: CoefficientModule::Hyperfunction,
        dims,
        genus: g,
        lambda: Some(point),
    })
}

/// `dim H^i(Γ, F_{2n+1})`: `(1, 2g, 1)` for the trivial representation,
/// `(0, (2g−2)(2n+1), 0)` otherwise.
pub fn dims_finite(g: u32, n: u32) -> Result<CohomologyTable> {
    check_genus(g)?;
    let dims = if n == 0 {
        [1, 2 * u64::from(g), 1]
    } else {
        [0, two_g_minus_two(g) * u64::from(2 * n + 1), 0]
    };
    Ok(CohomologyTable {
        module: CoefficientModule::Finite(n),
        dims,
        genus: g,
        lambda: None,
    })
}

/// `dim H^i(Γ, D_{2n+1})`, the same on both sides: `(2g, 2, 0)` for `n = 0`,
/// `((2g−2)(2n+1), 0, 0)` otherwise.
pub fn dims_discrete(g: u32, n: u32, side: Side) -> Result<CohomologyTable> {
    check_genus(g)?;
    let dims = if n == 0 {
        [2 * u64::from(g), 2, 0]
    } else {
        [two_g_minus_two(g) * u64::from(2 * n + 1), 0, 0]
    };
    Ok(CohomologyTable {
        module: CoefficientModule::Discrete(n, side),
        dims,
        genus: g,
        lambda: None,
    })
}

/// Whether a long exact sequence with these dimensions can exist: the ranks
/// `r_i` of consecutive maps, forced by `d_i = r_{i−1} + r_i`, must be
/// nonnegative and the last one must vanish.
fn exact_sequence_possible(dims: &[u64]) -> bool {
    let mut rank: i64 = 0;
    for &d in dims {
        rank = d as i64 - rank;
        if rank < 0 {
            return false;
        }
    }
    rank == 0
}

/// Checks the long exact sequence of the short exact sequence for the
/// special regime: the Euler characteristic is additive, and the nine
/// dimensions admit consistent ranks.
pub fn check_les(g: u32, regime: Regime) -> Result<bool> {
    let n = regime
        .n()
        .ok_or_else(|| Error::InvalidInput("check_les needs a special regime".into()))?;
    let positive = regime.is_positive_side();
    let sign = if positive { 1.0 } else { -1.0 };
    let lambda = Complex64::new(sign * (f64::from(n) + 0.5), 0.0);
    let spec = LaplaceSpectrum::constants_only(1.0);
    let v = dims_hyperfunction(g, lambda, &spec)?;
    let side = if positive {
        Side::PosLambda
    } else {
        Side::NegLambda
    };
    let f = dims_finite(g, n)?;
    let d = dims_discrete(g, n, side)?;
    let (sub, quot) = if positive { (&f, &d) } else { (&d, &f) };
    let mut seq = Vec::with_capacity(9);
    for i in 0..3 {
        seq.extend([sub.dims[i], v.dims[i], quot.dims[i]]);
    }
    Ok(v.chi() == f.chi() + d.chi() && exact_sequence_possible(&seq))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PattersonCheck {
    Ok {
        order: i64,
    },
    Mismatch {
        divisor_order: i64,
        minus_chi_prime: i64,
    },
}

impl PattersonCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, Self::Ok { .. })
    }
}

/// Compares `ord_λ Z` from the divisor with `−χ'(Γ, V^{−ω})` at `λ`.
pub fn check_patterson(
    g: u32,
    lambda: Complex64,
    spec: &LaplaceSpectrum,
) -> Result<PattersonCheck> {
    let table = dims_hyperfunction(g, lambda, spec)?;
    let divisor = full_divisor(g, spec, lambda.norm() + 1.0)?;
    let order = divisor.order_at(lambda);
    let predicted = -table.chi_prime();
    Ok(if order == predicted {
        PattersonCheck::Ok { order }
    } else {
        PattersonCheck::Mismatch {
            divisor_order: order,
            minus_chi_prime: predicted,
        }
    })
}
