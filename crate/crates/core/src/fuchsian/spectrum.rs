//! The primitive length spectrum up to a cutoff.
//!
//! Every conjugacy class of length `ℓ <= L` has a representative whose axis
//! meets the Dirichlet domain `D`; such a representative moves `i` by at most
//! `R = 2 asinh(sinh(L/2) cosh r_c)`. The orbit of `i` within that distance
//! is reached by walking from tile to tile across the sides of `D`, which is
//! what [`orbit_ball`] does. Two representatives with axes through `D` are
//! conjugate exactly when they are linked by a chain of conjugations by side
//! pairings (follow the axis from tile to tile), so conjugacy classes come out
//! of a union-find over those links, and powers are detected by lookup.
//!
//! The search runs in double precision; one representative per class is then
//! re-evaluated from its word at the working precision.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use rug::Float;

use super::mat::Mat2;
use super::orbit::orbit_ball;
use super::FuchsianGroup;
use crate::error::{Error, Result};
use crate::hyperbolic::{classify, reduce_word, Classification, Word};
use crate::precision::{format_decimal, Precision};

/// Slack added to the double-precision search bounds.
const SEARCH_SLACK: f64 = 1e-6;
/// Inflation of the domain when testing whether an axis meets it.
const AXIS_TOL: f64 = 1e-9;
/// Largest allowed disagreement between the screened and the re-evaluated length.
const SCREEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeGeodesic {
    pub length: Float,
    pub m_sign: i8,
    /// Number of primitive conjugacy classes with this `(ℓ, m_sign)`.
    pub multiplicity: u32,
    /// Shortest-path word of one representative (empty when read from a file).
    pub representative_word: Word,
}

/// Bookkeeping from the enumeration, for diagnostics and certification.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpectrumStats {
    pub covering_radius: f64,
    /// Displacement bound for class representatives.
    pub search_radius: f64,
    /// Displacement bound of the tile walk.
    pub prune_radius: f64,
    /// Elements visited by the tile walk.
    pub elements: usize,
    /// Elements whose axis meets the domain with `ℓ <= L`.
    pub candidates: usize,
    pub classes: usize,
    pub primitive_classes: usize,
    pub depth: usize,
    /// Elements reached with both signs of their SL(2,R) lift.
    pub sign_conflicts: usize,
    /// Classes containing representatives of both trace signs.
    pub class_sign_conflicts: usize,
    /// Powers `δⁿ` with `nℓ(δ) <= L` that were not found among the candidates.
    pub missing_powers: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthSpectrum {
    /// Sorted by `(ℓ, m_sign)`.
    pub geodesics: Vec<PrimeGeodesic>,
    pub cutoff: Float,
    pub group_label: String,
    pub precision: Precision,
    /// Set when the class bookkeeping could not be fully certified; the
    /// message says what went wrong and multiplicities may be merged.
    pub warning: Option<String>,
    pub stats: Option<SpectrumStats>,
}

impl LengthSpectrum {
    pub fn empty(label: &str, cutoff: Float, precision: Precision) -> Self {
        Self {
            geodesics: Vec::new(),
            cutoff,
            group_label: label.to_string(),
            precision,
            warning: None,
            stats: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.geodesics.is_empty()
    }

    /// Total number of primitive classes, counted with multiplicity.
    pub fn class_count(&self) -> u64 {
        self.geodesics
            .iter()
            .map(|g| u64::from(g.multiplicity))
            .sum()
    }

    pub fn systole(&self) -> Option<&Float> {
        self.geodesics.first().map(|g| &g.length)
    }

    /// The entries with `ℓ <= cutoff`, as a spectrum with that cutoff.
    pub fn truncated(&self, cutoff: &Float) -> Self {
        let mut out = self.clone();
        out.geodesics.retain(|g| g.length <= *cutoff);
        out.cutoff = cutoff.clone();
        out
    }

    /// Whether the two spectra agree entry by entry: same signs and
    /// multiplicities, lengths within `10^(-digits/2)`.
    pub fn same_classes(&self, other: &Self) -> bool {
        let tol = self.precision.dedup_tol();
        self.geodesics.len() == other.geodesics.len()
            && self.geodesics.iter().zip(&other.geodesics).all(|(a, b)| {
                a.m_sign == b.m_sign
                    && a.multiplicity == b.multiplicity
                    && Float::with_val(tol.prec(), &a.length - &b.length).abs() < tol
            })
    }

    /// The cache file: `# group`, `# Lmax`, `# precision` headers and one
    /// `ell <ℓ> m <±1> mult <n>` line per entry.
    pub fn to_file_string(&self) -> String {
        let digits = self.precision.digits();
        let mut out = String::new();
        let _ = writeln!(out, "# group {}", self.group_label);
        let _ = writeln!(out, "# Lmax {}", format_decimal(&self.cutoff, digits));
        let _ = writeln!(out, "# precision {digits}");
        for g in &self.geodesics {
            let _ = writeln!(
                out,
                "ell {} m {} mult {}",
                format_decimal(&g.length, digits),
                if g.m_sign < 0 { "-1" } else { "+1" },
                g.multiplicity
            );
        }
        out
    }
}

/// Reads a length-spectrum cache file.
pub fn parse_spectrum_file(text: &str) -> Result<LengthSpectrum> {
    let mut label = None;
    let mut cutoff_text = None;
    let mut digits = None;
    let mut rows = Vec::new();
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
            match parts.next() {
                Some("group") => label = Some(parts.collect::<Vec<_>>().join(" ")),
                Some("Lmax") => cutoff_text = parts.next().map(str::to_string),
                Some("precision") => {
                    digits = Some(
                        parts
                            .next()
                            .and_then(|p| p.parse::<u32>().ok())
                            .filter(|&d| d >= 10)
                            .ok_or_else(|| perr("bad precision".into()))?,
                    )
                }
                _ => {}
            }
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 6 || parts[0] != "ell" || parts[2] != "m" || parts[4] != "mult" {
            return Err(perr(format!(
                "expected `ell <l> m <+1|-1> mult <n>`, got `{line}`"
            )));
        }
        let m_sign = match parts[3] {
            "+1" | "1" => 1,
            "-1" => -1,
            other => return Err(perr(format!("bad sign `{other}`"))),
        };
        let multiplicity = parts[5]
            .parse::<u32>()
            .ok()
            .filter(|&m| m >= 1)
            .ok_or_else(|| perr(format!("bad multiplicity `{}`", parts[5])))?;
        rows.push((n + 1, parts[1].to_string(), m_sign, multiplicity));
    }
    let precision = Precision::new(digits.ok_or(Error::Parse {
        line: 0,
        message: "missing `# precision` header".into(),
    })?);
    let cutoff = cutoff_text
        .and_then(|c| precision.parse(&c))
        .ok_or(Error::Parse {
            line: 0,
            message: "missing or bad `# Lmax` header".into(),
        })?;
    let mut geodesics = Vec::with_capacity(rows.len());
    for (line, ell, m_sign, multiplicity) in rows {
        let length = precision.parse(&ell).ok_or_else(|| Error::Parse {
            line,
            message: format!("bad length `{ell}`"),
        })?;
        if length <= 0 {
            return Err(Error::Parse {
                line,
                message: "length must be positive".into(),
            });
        }
        geodesics.push(PrimeGeodesic {
            length,
            m_sign,
            multiplicity,
            representative_word: Vec::new(),
        });
    }
    Ok(LengthSpectrum {
        geodesics,
        cutoff,
        group_label: label.unwrap_or_default(),
        precision,
        warning: None,
        stats: None,
    })
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[parent[x as usize] as usize];
        parent[x as usize] = p;
        x = p;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    // keep the smaller index as root so roots are the first-found members
    match ra.cmp(&rb) {
        Ordering::Less => parent[rb as usize] = ra,
        Ordering::Greater => parent[ra as usize] = rb,
        Ordering::Equal => {}
    }
}

struct Candidate {
    node: u32,
    length: f64,
    sign: i8,
}

/// Computes all primitive conjugacy classes with `ℓ <= l_max`.
///
/// `max_depth` caps the number of tile steps of the search; with `None` the
/// walk runs until the displacement bound closes it. A cap that stops the
/// walk early yields [`Error::IncompleteBall`].
pub fn length_spectrum(
    group: &FuchsianGroup,
    l_max: &Float,
    max_depth: Option<usize>,
) -> Result<LengthSpectrum> {
    let prec = group.precision();
    let cutoff = Float::with_val(prec.bits(), l_max);
    if !(l_max.is_finite() && *l_max > 0) {
        return Err(Error::InvalidInput("L_max must be positive".into()));
    }
    let domain = group.dirichlet_domain()?;
    let big_l = l_max.to_f64() + SEARCH_SLACK;
    let r_c = domain.covering_radius;
    let search_radius = 2.0 * ((big_l / 2.0).sinh() * r_c.cosh()).asinh() + SEARCH_SLACK;
    let prune_radius = search_radius + r_c + SEARCH_SLACK;
    if !prune_radius.cosh().is_finite() {
        return Err(Error::InvalidInput(format!(
            "L_max = {big_l} is out of range"
        )));
    }

    let steps: Vec<Mat2> = domain.side_pairings.iter().map(|s| s.mat).collect();
    let ball = orbit_ball(&steps, prune_radius.cosh(), 1.0, max_depth);
    let mut stats = SpectrumStats {
        covering_radius: r_c,
        search_radius,
        prune_radius,
        elements: ball.nodes.len(),
        depth: ball.depth,
        sign_conflicts: ball.sign_conflicts,
        ..Default::default()
    };
    if !ball.complete {
        return Err(Error::IncompleteBall(format!(
            "tile walk capped at depth {} with elements left inside displacement {prune_radius:.6} \
             (covering radius {r_c:.6}, representative bound {search_radius:.6}, {} elements visited)",
            ball.depth,
            ball.nodes.len()
        )));
    }

    let cosh_search = search_radius.cosh();
    let candidates: Vec<Candidate> = ball
        .nodes
        .par_iter()
        .enumerate()
        .skip(1)
        .filter_map(|(i, n)| {
            if n.mat.cosh_displacement() > cosh_search {
                return None;
            }
            let length = n.mat.translation_length();
            if length == 0.0 || length > big_l {
                return None;
            }
            let (p, q) = n.mat.boundary_fixed_points()?;
            domain.chord_meets(p, q, AXIS_TOL).then_some(Candidate {
                node: i as u32,
                length,
                sign: if n.mat.trace() < 0.0 { -1 } else { 1 },
            })
        })
        .collect();
    stats.candidates = candidates.len();
    let mut slot = HashMap::with_capacity(candidates.len());
    for (k, c) in candidates.iter().enumerate() {
        slot.insert(c.node, k as u32);
    }
    let lookup = |m: &Mat2| ball.lookup(m).and_then(|node| slot.get(&node).copied());

    // conjugacy links and powers, computed in parallel and applied in order
    let links: Vec<(Vec<u32>, Vec<u32>, usize)> = candidates
        .par_iter()
        .map(|c| {
            let m = ball.nodes[c.node as usize].mat;
            let conj: Vec<u32> = steps
                .iter()
                .filter_map(|s| lookup(&s.inverse().mul(&m).mul(s)))
                .collect();
            let mut powers = Vec::new();
            let mut missing = 0;
            let mut n = 2u32;
            while f64::from(n) * c.length <= big_l {
                match lookup(&m.pow(n)) {
                    Some(k) => powers.push(k),
                    None => missing += 1,
                }
                n += 1;
            }
            (conj, powers, missing)
        })
        .collect();
    let mut parent: Vec<u32> = (0..candidates.len() as u32).collect();
    for (k, (conj, _, _)) in links.iter().enumerate() {
        for &j in conj {
            union(&mut parent, k as u32, j);
        }
    }
    let mut non_primitive = vec![false; candidates.len()];
    for (_, powers, missing) in &links {
        stats.missing_powers += missing;
        for &j in powers {
            let r = find(&mut parent, j);
            non_primitive[r as usize] = true;
        }
    }
    let mut class_sign: Vec<Option<i8>> = vec![None; candidates.len()];
    let mut conflicted = vec![false; candidates.len()];
    for k in 0..candidates.len() as u32 {
        let r = find(&mut parent, k) as usize;
        let s = candidates[k as usize].sign;
        match class_sign[r] {
            None => class_sign[r] = Some(s),
            Some(t) if t != s => conflicted[r] = true,
            _ => {}
        }
    }
    let roots: Vec<u32> = (0..candidates.len() as u32)
        .filter(|&k| find(&mut parent, k) == k)
        .collect();
    stats.classes = roots.len();
    stats.class_sign_conflicts = roots.iter().filter(|&&r| conflicted[r as usize]).count();
    let primitive: Vec<u32> = roots
        .into_iter()
        .filter(|&r| !non_primitive[r as usize])
        .collect();
    stats.primitive_classes = primitive.len();

    // re-evaluate one representative per class at the working precision
    let side_words: Vec<&Word> = domain.side_pairings.iter().map(|s| &s.word).collect();
    let evaluated: Vec<Result<(Float, i8, Word, u32)>> = primitive
        .par_iter()
        .map(|&r| {
            let c = &candidates[r as usize];
            let word: Word = ball
                .step_path(c.node)
                .into_iter()
                .flat_map(|s| side_words[s as usize].iter().copied())
                .collect();
            let word = reduce_word(&word);
            let g = group.evaluate(&word);
            match classify(&g)? {
                Classification::Hyperbolic(h) => {
                    if (h.length.to_f64() - c.length).abs() > SCREEN_TOL * (1.0 + c.length) {
                        return Err(Error::PrecisionExhausted {
                            first: word.clone(),
                            second: word,
                        });
                    }
                    Ok((h.length, h.m_sign, word, c.node))
                }
                _ => Err(Error::NotHyperbolic),
            }
        })
        .collect();
    let mut classes = Vec::with_capacity(evaluated.len());
    for e in evaluated {
        let (len, sign, word, node) = e?;
        if len <= cutoff {
            classes.push((len, sign, word, node));
        }
    }
    classes.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then(a.3.cmp(&b.3))
    });

    let tol = prec.dedup_tol();
    let mut geodesics = Vec::new();
    let mut start = 0;
    while start < classes.len() {
        let mut end = start + 1;
        while end < classes.len()
            && Float::with_val(prec.bits(), &classes[end].0 - &classes[start].0) < tol
        {
            end += 1;
        }
        for sign in [-1i8, 1] {
            let run: Vec<&(Float, i8, Word, u32)> =
                classes[start..end].iter().filter(|c| c.1 == sign).collect();
            if let Some(rep) = run.iter().min_by_key(|c| c.3) {
                geodesics.push(PrimeGeodesic {
                    length: rep.0.clone(),
                    m_sign: sign,
                    multiplicity: run.len() as u32,
                    representative_word: rep.2.clone(),
                });
            }
        }
        start = end;
    }

    let mut problems = Vec::new();
    if stats.sign_conflicts > 0 || stats.class_sign_conflicts > 0 {
        problems.push(format!(
            "trace sign is not a class function ({} element and {} class conflicts)",
            stats.sign_conflicts, stats.class_sign_conflicts
        ));
    }
    if stats.missing_powers > 0 {
        problems.push(format!(
            "{} powers of candidates were not found; primitivity may be overstated",
            stats.missing_powers
        ));
    }
    Ok(LengthSpectrum {
        geodesics,
        cutoff,
        group_label: group.label().to_string(),
        precision: prec,
        warning: (!problems.is_empty()).then(|| problems.join("; ")),
        stats: Some(stats),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::bolza_group;

    #[test]
    fn below_systole_is_empty() {
        let g = bolza_group(Precision::default());
        let s = length_spectrum(&g, &Precision::default().float(3.0), None).unwrap();
        assert!(s.is_empty());
        assert!(s.warning.is_none());
    }

    #[test]
    fn file_roundtrip() {
        let p = Precision::new(30);
        let spec = LengthSpectrum {
            geodesics: vec![
                PrimeGeodesic {
                    length: p.parse("3.0571418389619963225449123696").unwrap(),
                    m_sign: 1,
                    multiplicity: 24,
                    representative_word: vec![1],
                },
                PrimeGeodesic {
                    length: p.parse("4.2").unwrap(),
                    m_sign: -1,
                    multiplicity: 3,
                    representative_word: vec![],
                },
            ],
            cutoff: p.float(6.0),
            group_label: "bolza".into(),
            precision: p,
            warning: None,
            stats: None,
        };
        let text = spec.to_file_string();
        assert!(text.starts_with("# group bolza\n# Lmax 6.0"));
        let back = parse_spectrum_file(&text).unwrap();
        assert!(back.same_classes(&spec));
        assert_eq!(back.to_file_string(), text);
    }

    #[test]
    fn malformed_lines_are_rejected() {
        let bad = "# precision 30\n# Lmax 4\nell 3.1 m 0 mult 2\n";
        assert!(matches!(
            parse_spectrum_file(bad),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_spectrum_file("# Lmax 4\n").is_err());
    }
}
