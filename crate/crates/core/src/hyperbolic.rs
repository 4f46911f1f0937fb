//! SL(2,R) group elements at arbitrary precision and their classification.
//!
//! Elements keep their actual SL(2,R) matrix: the sign of the trace is the
//! M-part `m_g = ±I` of a hyperbolic element and is a class function of the
//! subgroup of SL(2,R). The identification `g ~ -g` is applied only where the
//! projective group is meant: [`GroupElement::canonical`] and
//! [`GroupElement::projective_distance`].

use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::Precision;

/// A generator word: signed 1-based generator indices, `-k` the inverse of `k`.
pub type Word = Vec<i32>;

/// Free reduction of a word (cancels adjacent `k, -k` pairs).
pub fn reduce_word(word: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &letter in word {
        if out.last() == Some(&-letter) {
            out.pop();
        } else {
            out.push(letter);
        }
    }
    out
}

pub fn invert_word(word: &[i32]) -> Word {
    word.iter().rev().map(|l| -l).collect()
}

#[derive(Clone)]
pub struct GroupElement {
    a: Float,
    b: Float,
    c: Float,
    d: Float,
    word: Word,
    prec: Precision,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.to_f64();
        write!(f, "[[{a}, {b}], [{c}, {d}]] word {:?}", self.word)
    }
}

impl GroupElement {
    /// Builds an element, checking `ad - bc = 1` against the classification
    /// tolerance scaled by the entry size.
    pub fn new(prec: Precision, entries: [Float; 4], word: Word) -> Result<Self> {
        let bits = prec.bits();
        let [a, b, c, d] = entries.map(|x| Float::with_val(bits, x));
        let g = Self {
            a,
            b,
            c,
            d,
            word,
            prec,
        };
        let dev = g.det_deviation();
        if dev > g.det_tolerance() {
            return Err(Error::NotUnimodular {
                deviation: dev.to_f64(),
            });
        }
        Ok(g)
    }

    pub fn from_f64(prec: Precision, entries: [f64; 4], word: Word) -> Result<Self> {
        Self::new(prec, entries.map(|x| prec.float(x)), word)
    }

    pub fn identity(prec: Precision) -> Self {
        Self {
            a: prec.one(),
            b: prec.zero(),
            c: prec.zero(),
            d: prec.one(),
            word: Vec::new(),
            prec,
        }
    }

    /// Rotation of the upper half-plane about `i` by the angle `theta`.
    pub fn rotation(prec: Precision, theta: &Float) -> Self {
        let half = Float::with_val(prec.bits(), theta / 2u32);
        let (s, c) = half.sin_cos(prec.zero());
        Self {
            a: c.clone(),
            b: Float::with_val(prec.bits(), -&s),
            c: s,
            d: c,
            word: Vec::new(),
            prec,
        }
    }

    /// `diag(t^{1/2}, t^{-1/2})` for `t > 0`.
    pub fn diagonal(prec: Precision, t: &Float) -> Self {
        let s = Float::with_val(prec.bits(), t.sqrt_ref());
        let inv = Float::with_val(prec.bits(), s.recip_ref());
        Self {
            a: s,
            b: prec.zero(),
            c: prec.zero(),
            d: inv,
            word: Vec::new(),
            prec,
        }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn entries(&self) -> [&Float; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.a.to_f64(),
            self.b.to_f64(),
            self.c.to_f64(),
            self.d.to_f64(),
        ]
    }

    pub fn word(&self) -> &[i32] {
        &self.word
    }

    pub fn with_word(mut self, word: Word) -> Self {
        self.word = word;
        self
    }

    /// Re-evaluates the entries at a different precision (the stored values
    /// are extended, not recomputed; callers wanting more correct digits must
    /// rebuild from exact data).
    pub fn at_precision(&self, prec: Precision) -> Self {
        let bits = prec.bits();
        Self {
            a: Float::with_val(bits, &self.a),
            b: Float::with_val(bits, &self.b),
            c: Float::with_val(bits, &self.c),
            d: Float::with_val(bits, &self.d),
            word: self.word.clone(),
            prec,
        }
    }

    pub fn det(&self) -> Float {
        let bits = self.prec.bits();
        Float::with_val(bits, &self.a * &self.d) - Float::with_val(bits, &self.b * &self.c)
    }

    fn det_deviation(&self) -> Float {
        Float::with_val(self.prec.bits(), self.det() - 1u32).abs()
    }

    fn max_abs_entry(&self) -> Float {
        let mut m = Float::with_val(self.prec.bits(), self.a.abs_ref());
        for x in [&self.b, &self.c, &self.d] {
            let ax = Float::with_val(self.prec.bits(), x.abs_ref());
            if ax > m {
                m = ax;
            }
        }
        m
    }

    fn det_tolerance(&self) -> Float {
        let scale = self.max_abs_entry().square().max(&self.prec.one());
        self.prec.classify_tol() * scale
    }

    /// True when `ad - bc = 1` within the scaled tolerance.
    pub fn is_unimodular(&self) -> bool {
        self.det_deviation() <= self.det_tolerance()
    }

    pub fn trace(&self) -> Float {
        Float::with_val(self.prec.bits(), &self.a + &self.d)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let bits = self.prec.bits();
        let dot = |x1: &Float, y1: &Float, x2: &Float, y2: &Float| {
            Float::with_val(bits, x1 * y1) + Float::with_val(bits, x2 * y2)
        };
        let mut word = self.word.clone();
        word.extend_from_slice(&rhs.word);
        Self {
            a: dot(&self.a, &rhs.a, &self.b, &rhs.c),
            b: dot(&self.a, &rhs.b, &self.b, &rhs.d),
            c: dot(&self.c, &rhs.a, &self.d, &rhs.c),
            d: dot(&self.c, &rhs.b, &self.d, &rhs.d),
            word: reduce_word(&word),
            prec: self.prec,
        }
    }

    /// Inverse of a unimodular matrix: `[[d, -b], [-c, a]]`.
    pub fn inverse(&self) -> Self {
        let bits = self.prec.bits();
        Self {
            a: self.d.clone(),
            b: Float::with_val(bits, -&self.b),
            c: Float::with_val(bits, -&self.c),
            d: self.a.clone(),
            word: invert_word(&self.word),
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Self {
        let bits = self.prec.bits();
        Self {
            a: Float::with_val(bits, -&self.a),
            b: Float::with_val(bits, -&self.b),
            c: Float::with_val(bits, -&self.c),
            d: Float::with_val(bits, -&self.d),
            word: self.word.clone(),
            prec: self.prec,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity(self.prec);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `h g h^{-1}`.
    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.mul(self).mul(&h.inverse())
    }

    /// Representative of `±g` whose first nonzero entry (row-major, at the
    /// classification tolerance) is positive.
    pub fn canonical(&self) -> Self {
        let tol = self.prec.classify_tol();
        for x in [&self.a, &self.b, &self.c, &self.d] {
            if Float::with_val(self.prec.bits(), x.abs_ref()) > tol {
                return if x.is_sign_negative() {
                    self.neg()
                } else {
                    self.clone()
                };
            }
        }
        self.clone()
    }

    /// Sup-norm distance between entries.
    pub fn sup_distance(&self, other: &Self) -> Float {
        let bits = self.prec.bits();
        let mut m = self.prec.zero();
        for (x, y) in self.entries().into_iter().zip(other.entries()) {
            let d = Float::with_val(bits, x - y).abs();
            if d > m {
                m = d;
            }
        }
        m
    }

    /// Distance in PSL(2,R): the smaller of `|g - h|` and `|g + h|` in sup norm.
    pub fn projective_distance(&self, other: &Self) -> Float {
        let direct = self.sup_distance(other);
        let flipped = self.sup_distance(&other.neg());
        direct.min(&flipped)
    }

    /// Hyperbolic distance between `i` and `g·i`:
    /// `cosh d = (a² + b² + c² + d²) / 2`.
    pub fn displacement(&self) -> Float {
        let bits = self.prec.bits();
        let sum = Float::with_val(bits, self.a.square_ref())
            + Float::with_val(bits, self.b.square_ref())
            + Float::with_val(bits, self.c.square_ref())
            + Float::with_val(bits, self.d.square_ref());
        let cosh = (sum / 2u32).max(&self.prec.one());
        cosh.acosh()
    }
}

/// Geometric data of a hyperbolic element, conjugate to `m_g a_g` with
/// `a_g = diag(t^{1/2}, t^{-1/2})`.
#[derive(Debug, Clone)]
pub struct HyperbolicData {
    /// Translation length `ℓ = log t`.
    pub length: Float,
    /// `t = e^ℓ > 1`.
    pub t: Float,
    /// Sign of the trace, i.e. `m_g = m_sign · I`.
    pub m_sign: i8,
}

#[derive(Debug, Clone)]
pub enum Classification {
    Identity,
    Elliptic,
    Hyperbolic(HyperbolicData),
}

impl Classification {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, Self::Hyperbolic(_))
    }
}

/// Classifies `g` by its trace against the boundary `|tr| = 2`.
///
/// Elements with `|tr|` within tolerance of 2 that are not `±I` cannot be
/// told apart from parabolic ones at this precision and are reported as
/// [`Error::IndeterminateClass`].
pub fn classify(g: &GroupElement) -> Result<Classification> {
    let prec = g.precision();
    if !g.is_unimodular() {
        return Err(Error::NotUnimodular {
            deviation: g.det_deviation().to_f64(),
        });
    }
    let tol = prec.classify_tol();
    let id = GroupElement::identity(prec);
    if g.projective_distance(&id) <= tol {
        return Ok(Classification::Identity);
    }
    let tr = g.trace();
    let abs_tr = Float::with_val(prec.bits(), tr.abs_ref());
    let excess = Float::with_val(prec.bits(), &abs_tr - 2u32);
    if Float::with_val(prec.bits(), excess.abs_ref()) <= tol {
        return Err(Error::IndeterminateClass {
            excess: excess.to_f64(),
        });
    }
    if excess.is_sign_negative() {
        return Ok(Classification::Elliptic);
    }
    let length = Float::with_val(prec.bits(), abs_tr / 2u32).acosh() * 2u32;
    let t = Float::with_val(prec.bits(), length.exp_ref());
    let m_sign = if tr.is_sign_negative() { -1 } else { 1 };
    Ok(Classification::Hyperbolic(HyperbolicData {
        length,
        t,
        m_sign,
    }))
}

/// `ℓ(g) = 2 arccosh(|tr g| / 2)`.
pub fn translation_length(g: &GroupElement) -> Result<Float> {
    match classify(g)? {
        Classification::Hyperbolic(h) => Ok(h.length),
        _ => Err(Error::NotHyperbolic),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prec() -> Precision {
        Precision::default()
    }

    fn hyperbolic_with_trace(tr: f64) -> GroupElement {
        // [[x, y], [y, x]] with x = tr/2, y = sqrt(x^2 - 1)
        let p = prec();
        let x = p.float(tr) / 2u32;
        let y = (Float::with_val(p.bits(), x.square_ref()) - 1u32).sqrt();
        GroupElement::new(p, [x.clone(), y.clone(), y, x], vec![]).unwrap()
    }

    fn random_element(seed: [f64; 3]) -> GroupElement {
        let p = prec();
        let r1 = GroupElement::rotation(p, &p.float(seed[0]));
        let r2 = GroupElement::rotation(p, &p.float(seed[2]));
        let t = Float::with_val(p.bits(), p.float(seed[1]).exp());
        r1.mul(&GroupElement::diagonal(p, &t)).mul(&r2)
    }

    #[test]
    fn diagonal_e_has_length_two() {
        let p = prec();
        let t = Float::with_val(p.bits(), p.float(2.0).exp());
        let g = GroupElement::diagonal(p, &t);
        match classify(&g).unwrap() {
            Classification::Hyperbolic(h) => {
                assert!((h.length - 2u32).abs().to_f64() < 1e-35);
                assert_eq!(h.m_sign, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rotation_is_elliptic() {
        let p = prec();
        let third = Float::with_val(p.bits(), rug::float::Constant::Pi) / 3u32;
        let g = GroupElement::rotation(p, &third);
        assert!(matches!(classify(&g).unwrap(), Classification::Elliptic));
    }

    #[test]
    fn negative_trace_bolza_generator() {
        // [[-(1+√2), -x], [-x, -(1+√2)]], x = sqrt(2 + 2√2)
        let p = prec();
        let s2 = Float::with_val(p.bits(), 2u32).sqrt();
        let diag = Float::with_val(p.bits(), &s2 + 1u32);
        let off = Float::with_val(p.bits(), s2 * 2u32 + 2u32).sqrt();
        let g = GroupElement::new(p, [-diag.clone(), -off.clone(), -off, -diag], vec![]).unwrap();
        match classify(&g).unwrap() {
            Classification::Hyperbolic(h) => {
                let expected = p
                    .parse("3.0571418389619963225449123695873467865773665924717")
                    .unwrap();
                assert!((h.length - expected).abs().to_f64() < 1e-35);
                assert_eq!(h.m_sign, -1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_and_minus_identity() {
        let id = GroupElement::identity(prec());
        assert!(matches!(classify(&id).unwrap(), Classification::Identity));
        assert!(matches!(
            classify(&id.neg()).unwrap(),
            Classification::Identity
        ));
    }

    #[test]
    fn near_parabolic_is_indeterminate() {
        let g = GroupElement::from_f64(prec(), [1.0, 1.0, 0.0, 1.0], vec![]).unwrap();
        assert!(matches!(
            classify(&g),
            Err(Error::IndeterminateClass { .. })
        ));
        assert!(matches!(
            translation_length(&g),
            Err(Error::IndeterminateClass { .. })
        ));
    }

    #[test]
    fn non_unimodular_rejected() {
        let err = GroupElement::from_f64(prec(), [2.0, 0.0, 0.0, 1.0], vec![]).unwrap_err();
        assert!(matches!(err, Error::NotUnimodular { .. }));
    }

    #[test]
    fn translation_length_of_diag_e4() {
        let p = prec();
        let t = Float::with_val(p.bits(), p.float(4.0).exp());
        let l = translation_length(&GroupElement::diagonal(p, &t)).unwrap();
        assert!((l - 4u32).abs().to_f64() < 1e-35);
        let rot = GroupElement::rotation(p, &p.float(0.5));
        assert_eq!(translation_length(&rot).unwrap_err(), Error::NotHyperbolic);
    }

    #[test]
    fn canonical_representative_has_positive_lead() {
        let g = hyperbolic_with_trace(5.0).neg();
        let c = g.canonical();
        assert!(c.entries()[0].is_sign_positive());
        assert!(c.projective_distance(&g).to_f64() < 1e-35);
        let pi = Float::with_val(prec().bits(), rug::float::Constant::Pi);
        let rot = GroupElement::rotation(prec(), &pi);
        // a = cos(π/2) ≈ 0: lead entry is b
        assert!(rot.canonical().entries()[1].is_sign_positive());
    }

    #[test]
    fn word_bookkeeping() {
        assert_eq!(reduce_word(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(invert_word(&[1, -2, 3]), vec![-3, 2, -1]);
        let g = hyperbolic_with_trace(3.0).with_word(vec![1]);
        let h = hyperbolic_with_trace(4.0).with_word(vec![2]);
        assert_eq!(g.mul(&h).word(), &[1, 2]);
        assert!(g.mul(&g.inverse()).word().is_empty());
    }

    #[test]
    fn determinant_survives_long_chains() {
        let mut acc = GroupElement::identity(prec());
        let mut x = 0.1234_f64;
        for _ in 0..10_000 {
            // logistic map as a cheap deterministic parameter stream
            x = 3.99 * x * (1.0 - x);
            let step = random_element([x * 6.0, (x - 0.5) * 0.02, x * 11.0]);
            acc = acc.mul(&step);
        }
        assert!(acc.is_unimodular(), "det = {}", acc.det().to_f64());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn classification_is_projective(a in 0.0..6.3f64, s in 0.05..3.0f64, b in 0.0..6.3f64) {
            let g = random_element([a, s, b]);
            let c1 = classify(&g).unwrap();
            let c2 = classify(&g.neg()).unwrap();
            match (c1, c2) {
                (Classification::Hyperbolic(h1), Classification::Hyperbolic(h2)) => {
                    prop_assert!((h1.length - h2.length).abs().to_f64() < 1e-30);
                    prop_assert_eq!(h1.m_sign, -h2.m_sign);
                }
                (Classification::Elliptic, Classification::Elliptic) => {}
                (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
            }
        }

        #[test]
        fn length_is_conjugation_invariant(
            s in 0.2..3.0f64,
            a in 0.0..6.3f64, hs in 0.0..2.0f64, b in 0.0..6.3f64,
        ) {
            let p = prec();
            let t = Float::with_val(p.bits(), p.float(2.0 * s).exp());
            let g = GroupElement::diagonal(p, &t);
            let h = random_element([a, hs, b]);
            let l1 = translation_length(&g).unwrap();
            let l2 = translation_length(&g.conjugate_by(&h)).unwrap();
            prop_assert!((l1 - l2).abs() < p.classify_tol());
        }

        #[test]
        fn length_of_power_scales(s in 0.1..1.0f64, n in 1u32..=10) {
            let p = prec();
            let t = Float::with_val(p.bits(), p.float(s).exp());
            let g = GroupElement::diagonal(p, &t)
                .conjugate_by(&random_element([0.3, 0.7, 1.9]));
            let l1 = translation_length(&g).unwrap();
            let ln = translation_length(&g.pow(n)).unwrap();
            prop_assert!((ln - l1 * n).abs().to_f64() < 1e-28);
        }
    }
}
