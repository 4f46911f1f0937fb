//! Dirichlet fundamental domain centred at `i`, computed in the Klein model.
//!
//! In the Klein model the perpendicular bisector of `i` and an orbit point is
//! a straight chord, so the Dirichlet cell is an intersection of Euclidean
//! half-planes. The cell built from a finite set of orbit points contains the
//! true domain; equality is certified by comparing its hyperbolic area with
//! the Gauss–Bonnet value `4π(g − 1)`.

use std::f64::consts::PI;

use super::mat::Mat2;
use super::orbit::orbit_ball;
use crate::error::{Error, Result};
use crate::hyperbolic::{reduce_word, Word};

const AREA_TOL: f64 = 1e-7;
const MAX_ATTEMPTS: usize = 8;
const VERTEX_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SidePairing {
    pub mat: Mat2,
    pub word: Word,
}

#[derive(Debug, Clone)]
pub struct DirichletDomain {
    /// Vertices in the Klein model, counter-clockwise.
    pub vertices: Vec<[f64; 2]>,
    /// Side pairings in side order: side `k` is the bisector of `i` and `s_k·i`.
    pub side_pairings: Vec<SidePairing>,
    /// Largest distance from `i` to a point of the domain.
    pub covering_radius: f64,
    pub area: f64,
    /// Smallest displacement `d(i, g·i)` over nontrivial elements.
    pub min_displacement: f64,
}

impl DirichletDomain {
    /// Whether the chord between two Klein points meets the closed domain,
    /// with the domain inflated by `tol`.
    pub fn chord_meets(&self, p: [f64; 2], q: [f64; 2], tol: f64) -> bool {
        let dir = [q[0] - p[0], q[1] - p[1]];
        let norm = dir[0].hypot(dir[1]);
        if norm == 0.0 {
            return false;
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in &self.vertices {
            let s = (dir[0] * (v[1] - p[1]) - dir[1] * (v[0] - p[0])) / norm;
            lo = lo.min(s);
            hi = hi.max(s);
        }
        lo <= tol && hi >= -tol
    }
}

type Labeled = ([f64; 2], i64);

/// Clips a labelled convex polygon by `n·k <= h`; `label` tags the new side.
fn clip(poly: &[Labeled], n: [f64; 2], h: f64, label: i64) -> Vec<Labeled> {
    let f = |k: &[f64; 2]| n[0] * k[0] + n[1] * k[1] - h;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, lp) = poly[i];
        let (q, _) = poly[(i + 1) % poly.len()];
        let (fp, fq) = (f(&p), f(&q));
        let p_in = fp <= 0.0;
        let q_in = fq <= 0.0;
        if p_in {
            out.push((p, lp));
        }
        if p_in != q_in {
            let t = fp / (fp - fq);
            let x = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
            out.push((x, if p_in { label } else { lp }));
        }
    }
    // drop vertices that coincide with their successor
    let mut cleaned: Vec<Labeled> = Vec::with_capacity(out.len());
    for v in out {
        if let Some(last) = cleaned.last() {
            if (last.0[0] - v.0[0]).hypot(last.0[1] - v.0[1]) < 1e-15 {
                cleaned.pop();
            }
        }
        cleaned.push(v);
    }
    if cleaned.len() > 1 {
        let first = cleaned[0].0;
        let last = cleaned[cleaned.len() - 1].0;
        if (first[0] - last[0]).hypot(first[1] - last[1]) < 1e-15 {
            cleaned.pop();
        }
    }
    cleaned
}

/// Collapses sides shorter than `tol`. Several bisectors pass through each
/// vertex of the domain, so clipping leaves sides of rounding-error length
/// there. The vertex starting a collapsed side takes over the label of the
/// side that follows it.
fn merge_close_vertices(poly: Vec<Labeled>, tol: f64) -> Vec<Labeled> {
    let close = |p: &[f64; 2], q: &[f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]) < tol;
    let mut out: Vec<Labeled> = Vec::with_capacity(poly.len());
    for v in poly {
        match out.last_mut() {
            Some(last) if close(&last.0, &v.0) => last.1 = v.1,
            _ => out.push(v),
        }
    }
    while out.len() > 1 && close(&out[out.len() - 1].0, &out[0].0) {
        let last = out.pop().expect("nonempty");
        out[0].0 = last.0;
    }
    out
}

fn to_hyperboloid(k: [f64; 2]) -> [f64; 3] {
    let s = (1.0 - k[0] * k[0] - k[1] * k[1]).sqrt();
    [k[0] / s, k[1] / s, 1.0 / s]
}

fn minkowski(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] - u[2] * v[2]
}

/// Interior angle at `v` of the geodesic triangle corner `a - v - b`.
fn corner_angle(a: &[f64; 3], v: &[f64; 3], b: &[f64; 3]) -> f64 {
    let tangent = |x: &[f64; 3]| {
        let c = minkowski(x, v);
        [x[0] + c * v[0], x[1] + c * v[1], x[2] + c * v[2]]
    };
    let ta = tangent(a);
    let tb = tangent(b);
    let cos = minkowski(&ta, &tb) / (minkowski(&ta, &ta) * minkowski(&tb, &tb)).sqrt();
    cos.clamp(-1.0, 1.0).acos()
}

/// Hyperbolic area of a convex polygon given by Klein-model vertices.
pub fn polygon_area(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    let h: Vec<[f64; 3]> = vertices.iter().map(|&k| to_hyperboloid(k)).collect();
    let angle_sum: f64 = (0..n)
        .map(|i| corner_angle(&h[(i + n - 1) % n], &h[i], &h[(i + 1) % n]))
        .sum();
    (n as f64 - 2.0) * PI - angle_sum
}

/// Computes and certifies the Dirichlet domain of the group generated by
/// `generators` (inverses are added here).
pub fn dirichlet_domain(generators: &[(Mat2, Word)], genus: u32) -> Result<DirichletDomain> {
    if generators.is_empty() {
        return Err(Error::InvalidInput("no generators".into()));
    }
    let mut letters: Vec<Mat2> = Vec::new();
    let mut letter_words: Vec<Word> = Vec::new();
    for (m, w) in generators {
        letters.push(*m);
        letter_words.push(w.clone());
        letters.push(m.inverse());
        letter_words.push(crate::hyperbolic::invert_word(w));
    }
    let target = 4.0 * PI * (genus as f64 - 1.0);
    let max_gen = letters.iter().map(Mat2::displacement).fold(0.0, f64::max);
    let mut rho = (2.0 * max_gen).max(1.0);
    let mut last_reason = String::new();

    for _ in 0..MAX_ATTEMPTS {
        let ball = orbit_ball(&letters, (rho + max_gen).cosh(), 0.5, None);
        let mut constraints: Vec<(f64, u32)> = ball
            .nodes
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, n)| (n.mat.cosh_displacement(), i as u32))
            .filter(|(c, _)| *c <= rho.cosh())
            .collect();
        constraints.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut poly: Vec<Labeled> = vec![
            ([-2.0, -2.0], -1),
            ([2.0, -2.0], -1),
            ([2.0, 2.0], -1),
            ([-2.0, 2.0], -1),
        ];
        for &(_, idx) in &constraints {
            let [x, y, z] = ball.nodes[idx as usize].mat.orbit_point();
            poly = clip(&poly, [x, y], z - 1.0, idx as i64);
            if poly.len() < 3 {
                return Err(Error::FundamentalDomain("cell collapsed".into()));
            }
        }

        let closed = poly
            .iter()
            .all(|(k, l)| *l >= 0 && k[0] * k[0] + k[1] * k[1] < 1.0 - 1e-12);
        if !closed {
            last_reason = format!("cell not closed at exploration radius {rho:.3}");
            rho *= 1.5;
            continue;
        }
        let poly = merge_close_vertices(poly, VERTEX_MERGE_TOL);
        let vertices: Vec<[f64; 2]> = poly.iter().map(|(k, _)| *k).collect();
        let covering_radius = vertices
            .iter()
            .map(|k| k[0].hypot(k[1]).atanh())
            .fold(0.0, f64::max);
        let area = polygon_area(&vertices);
        if 2.0 * covering_radius > rho + 1e-9 || (area - target).abs() > AREA_TOL {
            last_reason = format!(
                "area {area:.9} vs {target:.9}, covering radius {covering_radius:.6} at exploration radius {rho:.3}"
            );
            rho *= 1.5;
            continue;
        }

        let mut side_pairings = Vec::new();
        for (_, label) in &poly {
            let node = *label as u32;
            let word: Word = ball
                .step_path(node)
                .into_iter()
                .flat_map(|s| letter_words[s as usize].clone())
                .collect();
            side_pairings.push(SidePairing {
                mat: ball.nodes[node as usize].mat,
                word: reduce_word(&word),
            });
        }
        for s in &side_pairings {
            let inv = s.mat.inverse();
            if !side_pairings
                .iter()
                .any(|t| t.mat.sup_distance(&inv) < 1e-8)
            {
                return Err(Error::FundamentalDomain(
                    "side pairings are not closed under inversion".into(),
                ));
            }
        }
        let min_displacement = side_pairings
            .iter()
            .map(|s| s.mat.displacement())
            .fold(f64::INFINITY, f64::min);
        return Ok(DirichletDomain {
            vertices,
            side_pairings,
            covering_radius,
            area,
            min_displacement,
        });
    }
    Err(Error::FundamentalDomain(last_reason))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_octagon_area_matches_gauss_bonnet() {
        // circumradius of the regular n-gon with interior angle α:
        // cosh R = cot(π/n) cot(α/2)
        let n = 8;
        let alpha = PI / 4.0;
        let cosh_r = (1.0 / (PI / n as f64).tan()) * (1.0 / (alpha / 2.0).tan());
        let klein_r = (1.0 - 1.0 / (cosh_r * cosh_r)).sqrt();
        let verts: Vec<[f64; 2]> = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                [klein_r * t.cos(), klein_r * t.sin()]
            })
            .collect();
        let area = polygon_area(&verts);
        assert!((area - ((n as f64 - 2.0) * PI - n as f64 * alpha)).abs() < 1e-10);
        assert!((area - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn clipping_keeps_labels() {
        let square: Vec<Labeled> = vec![
            ([-1.0, -1.0], 0),
            ([1.0, -1.0], 1),
            ([1.0, 1.0], 2),
            ([-1.0, 1.0], 3),
        ];
        let clipped = clip(&square, [1.0, 0.0], 0.5, 9);
        assert_eq!(clipped.len(), 4);
        let labels: Vec<i64> = clipped.iter().map(|v| v.1).collect();
        assert_eq!(labels, vec![0, 9, 2, 3]);
    }

    #[test]
    fn tiny_sides_are_collapsed() {
        let poly: Vec<Labeled> = vec![
            ([0.0, 0.0], 0),
            ([1.0, 0.0], 1),
            ([1.0, 1e-12], 2),
            ([0.0, 1.0], 3),
            ([1e-13, 1.0], 4),
        ];
        let merged = merge_close_vertices(poly, 1e-9);
        let labels: Vec<i64> = merged.iter().map(|v| v.1).collect();
        assert_eq!(labels, vec![0, 2, 4]);
    }

    #[test]
    fn chord_test() {
        let dom = DirichletDomain {
            vertices: vec![[-0.1, -0.1], [0.1, -0.1], [0.1, 0.1], [-0.1, 0.1]],
            side_pairings: vec![],
            covering_radius: 0.0,
            area: 0.0,
            min_displacement: 0.0,
        };
        assert!(dom.chord_meets([-1.0, 0.0], [1.0, 0.0], 0.0));
        assert!(!dom.chord_meets([-1.0, 0.5], [1.0, 0.5], 0.0));
        assert!(dom.chord_meets([-1.0, 0.1], [1.0, 0.1], 1e-12));
    }
}
