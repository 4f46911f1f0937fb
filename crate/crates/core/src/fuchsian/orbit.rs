//! Breadth-first enumeration of group elements by the position of `g·i`.
//!
//! The group acts freely on H², so an element is identified by its orbit
//! point. Orbit points are bucketed on a square grid over the hyperboloid
//! coordinates `(X, Y)`; lookups compare against the few buckets within
//! tolerance of the query.

use std::collections::HashMap;

use rayon::prelude::*;

use super::mat::Mat2;

/// Relative tolerance on hyperboloid coordinates when matching orbit points.
const MATCH_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct OrbitIndex {
    cell: f64,
    points: Vec<[f64; 3]>,
    heads: HashMap<(i64, i64), u32>,
    next: Vec<u32>,
}

const NIL: u32 = u32::MAX;

impl OrbitIndex {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0);
        Self {
            cell,
            points: Vec::new(),
            heads: HashMap::new(),
            next: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn key(&self, x: f64, y: f64) -> (i64, i64) {
        (
            (x / self.cell).floor() as i64,
            (y / self.cell).floor() as i64,
        )
    }

    fn tol(p: &[f64; 3]) -> f64 {
        MATCH_REL_TOL * (1.0 + p[2])
    }

    pub fn find(&self, p: &[f64; 3]) -> Option<u32> {
        let tol = Self::tol(p);
        let (x0, y0) = self.key(p[0] - tol, p[1] - tol);
        let (x1, y1) = self.key(p[0] + tol, p[1] + tol);
        for kx in x0..=x1 {
            for ky in y0..=y1 {
                let mut cur = self.heads.get(&(kx, ky)).copied().unwrap_or(NIL);
                while cur != NIL {
                    let q = &self.points[cur as usize];
                    if (q[0] - p[0]).abs() <= tol && (q[1] - p[1]).abs() <= tol {
                        return Some(cur);
                    }
                    cur = self.next[cur as usize];
                }
            }
        }
        None
    }

    /// Appends a point without checking for duplicates; returns its index.
    pub fn push(&mut self, p: [f64; 3]) -> u32 {
        let idx = self.points.len() as u32;
        let key = self.key(p[0], p[1]);
        let head = self.heads.insert(key, idx).unwrap_or(NIL);
        self.points.push(p);
        self.next.push(head);
        idx
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OrbitNode {
    pub mat: Mat2,
    /// Index of the parent node (`u32::MAX` for the identity).
    pub parent: u32,
    /// Step taken from the parent: `mat = parent.mat * steps[step]`.
    pub step: u32,
    pub depth: u32,
}

#[derive(Debug, Clone)]
pub struct OrbitBall {
    pub nodes: Vec<OrbitNode>,
    pub index: OrbitIndex,
    /// Times an element was reached as both `g` and `-g`.
    pub sign_conflicts: usize,
    /// Deepest layer that produced new elements.
    pub depth: usize,
    /// False when the depth cap stopped the search with a non-empty frontier.
    pub complete: bool,
}

impl OrbitBall {
    pub fn lookup(&self, m: &Mat2) -> Option<u32> {
        self.index.find(&m.orbit_point())
    }

    /// Step indices from the identity to `node`.
    pub fn step_path(&self, mut node: u32) -> Vec<u32> {
        let mut path = Vec::new();
        while self.nodes[node as usize].parent != NIL {
            path.push(self.nodes[node as usize].step);
            node = self.nodes[node as usize].parent;
        }
        path.reverse();
        path
    }
}

/// Enumerates `{g : cosh d(i, g·i) <= prune_cosh}` reachable from the
/// identity by right multiplication with `steps` through elements that also
/// satisfy the bound. Layers are processed in order and children in step
/// order, so the output is identical for any number of worker threads.
pub fn orbit_ball(
    steps: &[Mat2],
    prune_cosh: f64,
    cell: f64,
    max_depth: Option<usize>,
) -> OrbitBall {
    let mut index = OrbitIndex::new(cell);
    let mut nodes = vec![OrbitNode {
        mat: Mat2::IDENTITY,
        parent: NIL,
        step: 0,
        depth: 0,
    }];
    index.push(Mat2::IDENTITY.orbit_point());
    let mut sign_conflicts = 0;
    let mut layer: Vec<u32> = vec![0];
    let mut depth = 0;
    let mut complete = true;

    while !layer.is_empty() {
        if max_depth.is_some_and(|cap| depth >= cap) {
            // any in-bound child of the last layer means the cap was binding
            let frontier = layer.iter().any(|&i| {
                let m = nodes[i as usize].mat;
                steps.iter().any(|s| {
                    let c = m.mul(s);
                    c.cosh_displacement() <= prune_cosh && index.find(&c.orbit_point()).is_none()
                })
            });
            complete = !frontier;
            break;
        }
        let children: Vec<Vec<(Mat2, u32, u32)>> = layer
            .par_chunks(1024)
            .map(|chunk| {
                let mut out = Vec::new();
                for &i in chunk {
                    let m = nodes[i as usize].mat;
                    for (k, s) in steps.iter().enumerate() {
                        let c = m.mul(s);
                        if c.cosh_displacement() <= prune_cosh {
                            out.push((c, i, k as u32));
                        }
                    }
                }
                out
            })
            .collect();
        let mut next_layer = Vec::new();
        for (mat, parent, step) in children.into_iter().flatten() {
            let p = mat.orbit_point();
            if let Some(existing) = index.find(&p) {
                let e = &nodes[existing as usize].mat;
                if e.sup_distance(&mat) > e.sup_distance(&mat.neg()) {
                    sign_conflicts += 1;
                }
                continue;
            }
            index.push(p);
            nodes.push(OrbitNode {
                mat,
                parent,
                step,
                depth: depth as u32 + 1,
            });
            next_layer.push(nodes.len() as u32 - 1);
        }
        if !next_layer.is_empty() {
            depth += 1;
        }
        layer = next_layer;
    }

    OrbitBall {
        nodes,
        index,
        sign_conflicts,
        depth,
        complete,
    }
}
