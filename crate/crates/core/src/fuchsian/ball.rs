//! Word-metric balls at the working precision.

use std::cmp::Ordering;

use rayon::prelude::*;

use super::mat::Mat2;
use super::orbit::OrbitIndex;
use super::FuchsianGroup;
use crate::error::{Error, Result};
use crate::hyperbolic::{GroupElement, Word};

/// Elements of word length `<= radius`, one per element of PSL(2,R), each
/// carrying a shortest word (first in length-then-lexicographic order).
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: usize,
    /// The identity first, then by (word length, lexicographic word).
    pub elements: Vec<GroupElement>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of elements of each word length `0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius + 1];
        for e in &self.elements {
            sizes[e.word().len()] += 1;
        }
        sizes
    }

    /// Largest `D` such that every element `g` with `d(i, g·i) <= D` is in
    /// the ball. If the side pairings of the Dirichlet domain have word length
    /// at most `w`, a tile path from the domain to `g` must pass through the
    /// annulus of word lengths `(radius - w, radius]` at displacement at most
    /// `d(i, g·i) + r_c`, so `D = min_annulus d(i, δ·i) - r_c`.
    pub fn certified_displacement(&self, group: &FuchsianGroup) -> Result<f64> {
        let domain = group.dirichlet_domain()?;
        let w = domain
            .side_pairings
            .iter()
            .map(|s| s.word.len())
            .max()
            .unwrap_or(1);
        if w > self.radius {
            return Ok(0.0);
        }
        let lo = self.radius - w;
        let min = self
            .elements
            .iter()
            .filter(|e| e.word().len() > lo)
            .map(|e| Mat2(e.to_f64()).displacement())
            .fold(f64::INFINITY, f64::min);
        Ok((min - domain.covering_radius).max(0.0))
    }
}

fn letter_rank(l: i32) -> u32 {
    2 * (l.unsigned_abs() - 1) + u32::from(l < 0)
}

fn word_order(a: &[i32], b: &[i32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.iter()
            .map(|&l| letter_rank(l))
            .cmp(b.iter().map(|&l| letter_rank(l)))
    })
}

/// All freely reduced words of length `1..=radius` starting with `first`.
fn subtree(group: &FuchsianGroup, first: i32, radius: usize) -> Vec<GroupElement> {
    let letters = group.letters();
    let mut out = Vec::new();
    let mut stack = vec![group.letter(first).with_word(vec![first])];
    while let Some(e) = stack.pop() {
        if e.word().len() < radius {
            let last = *e.word().last().expect("nonempty word");
            for &l in letters.iter().rev() {
                if l == -last {
                    continue;
                }
                let mut w: Word = e.word().to_vec();
                w.push(l);
                stack.push(e.mul(&group.letter(l)).with_word(w));
            }
        }
        out.push(e);
    }
    out
}

/// Enumerates the word ball of the given radius over the generators and
/// their inverses, deduplicated in PSL(2,R).
///
/// Subtrees below each first letter are built in parallel and merged in a
/// fixed order, so the result does not depend on the thread count. Two words
/// that agree to the deduplication tolerance are re-evaluated at escalated
/// precision; if they separate there, the working precision was too low.
pub fn enumerate_ball(group: &FuchsianGroup, radius: usize) -> Result<Ball> {
    if radius == 0 {
        return Err(Error::InvalidInput("radius must be >= 1".into()));
    }
    let prec = group.precision();
    let mut words: Vec<GroupElement> = group
        .letters()
        .par_iter()
        .map(|&l| subtree(group, l, radius))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    words.sort_by(|a, b| word_order(a.word(), b.word()));

    let escalated = group.at_precision(prec.escalated(20));
    let tol = prec.dedup_tol();
    let mut index = OrbitIndex::new(0.25);
    let mut elements = vec![GroupElement::identity(prec)];
    index.push(Mat2::IDENTITY.orbit_point());
    for e in words {
        let p = Mat2(e.to_f64()).orbit_point();
        if let Some(existing) = index.find(&p) {
            let other = &elements[existing as usize];
            let scale = 1.0 + p[2];
            if e.projective_distance(other).to_f64() < tol.to_f64() * scale {
                let a = escalated.evaluate(e.word());
                let b = escalated.evaluate(other.word());
                let etol = escalated.precision().dedup_tol().to_f64() * scale;
                if a.projective_distance(&b).to_f64() >= etol {
                    return Err(Error::PrecisionExhausted {
                        first: other.word().to_vec(),
                        second: e.word().to_vec(),
                    });
                }
                continue;
            }
            // orbit points agree in double precision but the matrices differ:
            // only possible for a non-discrete group or a broken precision budget
            return Err(Error::PrecisionExhausted {
                first: other.word().to_vec(),
                second: e.word().to_vec(),
            });
        }
        index.push(p);
        elements.push(e);
    }
    Ok(Ball { radius, elements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::bolza_group;
    use crate::hyperbolic::classify;
    use crate::precision::Precision;

    #[test]
    fn radius_one_has_eight_generators_and_identity() {
        let g = bolza_group(Precision::default());
        let ball = enumerate_ball(&g, 1).unwrap();
        assert_eq!(ball.len(), 9);
        assert_eq!(ball.elements[0].word(), &[] as &[i32]);
        let words: Vec<&[i32]> = ball.elements[1..].iter().map(|e| e.word()).collect();
        assert_eq!(
            words,
            vec![&[1][..], &[-1], &[2], &[-2], &[3], &[-3], &[4], &[-4]]
        );
    }

    #[test]
    fn nontrivial_elements_are_hyperbolic() {
        let g = bolza_group(Precision::default());
        let ball = enumerate_ball(&g, 3).unwrap();
        for e in &ball.elements[1..] {
            assert!(classify(e).unwrap().is_hyperbolic(), "{e:?}");
        }
    }

    #[test]
    fn word_order_is_length_then_letters() {
        assert_eq!(word_order(&[2], &[1, 1]), Ordering::Less);
        assert_eq!(word_order(&[1, -1], &[1, 2]), Ordering::Less);
        assert_eq!(word_order(&[-1], &[2]), Ordering::Less);
        assert_eq!(word_order(&[3, 1], &[3, 1]), Ordering::Equal);
    }

    #[test]
    fn zero_radius_rejected() {
        let g = bolza_group(Precision::default());
        assert!(enumerate_ball(&g, 0).is_err());
    }
}
