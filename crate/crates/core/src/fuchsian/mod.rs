//! Cocompact torsion-free Fuchsian groups, element enumeration and the
//! primitive length spectrum.

mod ball;
pub mod dirichlet;
pub mod mat;
pub mod orbit;
mod primitive;
mod spectrum;

use std::sync::OnceLock;

use rug::float::Constant;
use rug::Float;

pub use ball::{enumerate_ball, Ball};
pub use primitive::{is_primitive, systole};
pub use spectrum::{
    length_spectrum, parse_spectrum_file, LengthSpectrum, PrimeGeodesic, SpectrumStats,
};

use crate::error::{Error, Result};
use crate::hyperbolic::{classify, GroupElement, Word};
use crate::precision::Precision;
use dirichlet::DirichletDomain;
use mat::Mat2;

/// How the generators are obtained, so that they can be rebuilt at any precision.
#[derive(Debug, Clone, PartialEq)]
enum GeneratorSource {
    Bolza,
    /// Decimal entries `[a, b, c, d]` as supplied.
    Decimal(Vec<[String; 4]>),
}

#[derive(Debug)]
pub struct FuchsianGroup {
    label: String,
    genus: u32,
    prec: Precision,
    source: GeneratorSource,
    generators: Vec<GroupElement>,
    domain: OnceLock<Result<DirichletDomain>>,
}

impl Clone for FuchsianGroup {
    fn clone(&self) -> Self {
        Self {
            label: self.label.clone(),
            genus: self.genus,
            prec: self.prec,
            source: self.source.clone(),
            generators: self.generators.clone(),
            domain: OnceLock::new(),
        }
    }
}

/// The genus-2 Bolza group: `g_k = R(kπ/4) H R(kπ/4)^{-1}`, `k = 0..3`, with
/// `H = [[1+√2, √(2+2√2)], [√(2+2√2), 1+√2]]` and `R(θ)` the rotation of H²
/// about `i` by `θ`.
pub fn bolza_group(prec: Precision) -> FuchsianGroup {
    let generators = bolza_generators(prec);
    FuchsianGroup {
        label: "bolza".into(),
        genus: 2,
        prec,
        source: GeneratorSource::Bolza,
        generators,
        domain: OnceLock::new(),
    }
}

fn bolza_generators(prec: Precision) -> Vec<GroupElement> {
    let bits = prec.bits();
    let sqrt2 = Float::with_val(bits, 2u32).sqrt();
    let diag = Float::with_val(bits, &sqrt2 + 1u32);
    let off = Float::with_val(bits, sqrt2 * 2u32 + 2u32).sqrt();
    let h = GroupElement::new(prec, [diag.clone(), off.clone(), off, diag], vec![])
        .expect("H is unimodular");
    let quarter_pi = Float::with_val(bits, Constant::Pi) / 4u32;
    (0..4)
        .map(|k| {
            let r = GroupElement::rotation(prec, &Float::with_val(bits, &quarter_pi * k));
            h.conjugate_by(&r).with_word(vec![k + 1])
        })
        .collect()
}

impl FuchsianGroup {
    /// A group from decimal generator entries. Every generator must be
    /// unimodular and hyperbolic; discreteness is certified lazily by the
    /// fundamental-domain computation.
    pub fn from_decimal(
        label: &str,
        genus: u32,
        entries: Vec<[String; 4]>,
        prec: Precision,
    ) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidInput(format!(
                "genus must be >= 2, got {genus}"
            )));
        }
        if entries.is_empty() {
            return Err(Error::InvalidInput("no generators".into()));
        }
        let generators = decimal_generators(&entries, prec)?;
        for g in &generators {
            if !classify(g)?.is_hyperbolic() {
                return Err(Error::InvalidInput(format!(
                    "generator {:?} is not hyperbolic",
                    g.word()
                )));
            }
        }
        Ok(Self {
            label: label.to_string(),
            genus,
            prec,
            source: GeneratorSource::Decimal(entries),
            generators,
            domain: OnceLock::new(),
        })
    }

    /// The same group with generators rebuilt at another precision.
    pub fn at_precision(&self, prec: Precision) -> Self {
        let generators = match &self.source {
            GeneratorSource::Bolza => bolza_generators(prec),
            GeneratorSource::Decimal(e) => {
                decimal_generators(e, prec).expect("entries were validated on construction")
            }
        };
        Self {
            label: self.label.clone(),
            genus: self.genus,
            prec,
            source: self.source.clone(),
            generators,
            domain: OnceLock::new(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Generator `k` (1-based) or its inverse for `-k`.
    pub fn letter(&self, letter: i32) -> GroupElement {
        let g = &self.generators[letter.unsigned_abs() as usize - 1];
        if letter > 0 {
            g.clone()
        } else {
            g.inverse()
        }
    }

    /// All letters in enumeration order `1, -1, 2, -2, ...`.
    pub fn letters(&self) -> Vec<i32> {
        (1..=self.generators.len() as i32)
            .flat_map(|k| [k, -k])
            .collect()
    }

    /// Evaluates a word at the group's working precision.
    pub fn evaluate(&self, word: &[i32]) -> GroupElement {
        let mut acc = GroupElement::identity(self.prec);
        for &l in word {
            acc = acc.mul(&self.letter(l));
        }
        acc
    }

    /// `vol(Y) = 4π(g − 1)`.
    pub fn volume(&self) -> Float {
        let bits = self.prec.bits();
        Float::with_val(bits, Constant::Pi) * 4u32 * (self.genus - 1)
    }

    pub fn fast_generators(&self) -> Vec<(Mat2, Word)> {
        self.generators
            .iter()
            .map(|g| (Mat2(g.to_f64()), g.word().to_vec()))
            .collect()
    }

    /// The certified Dirichlet domain at `i` (computed once).
    pub fn dirichlet_domain(&self) -> Result<&DirichletDomain> {
        self.domain
            .get_or_init(|| dirichlet::dirichlet_domain(&self.fast_generators(), self.genus))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Bytes identifying the group for cache keys.
    pub fn content_bytes(&self) -> Vec<u8> {
        let mut out = format!("label={};genus={};", self.label, self.genus).into_bytes();
        match &self.source {
            GeneratorSource::Bolza => out.extend_from_slice(b"bolza"),
            GeneratorSource::Decimal(e) => {
                for row in e {
                    out.extend_from_slice(row.join(",").as_bytes());
                    out.push(b';');
                }
            }
        }
        out
    }

    /// Parses a generator file: `# label <name>`, `# genus <g>` headers and one
    /// `gen <a> <b> <c> <d>` line per generator.
    pub fn parse_generator_file(text: &str, prec: Precision) -> Result<Self> {
        let mut label = None;
        let mut genus = None;
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
                match parts.next() {
                    Some("label") => label = Some(parts.collect::<Vec<_>>().join(" ")),
                    Some("genus") => {
                        genus = Some(
                            parts
                                .next()
                                .and_then(|g| g.parse::<u32>().ok())
                                .ok_or_else(|| perr("bad genus".into()))?,
                        )
                    }
                    _ => {}
                }
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 5 || parts[0] != "gen" {
                return Err(perr(format!("expected `gen a b c d`, got `{line}`")));
            }
            for p in &parts[1..] {
                if prec.parse(p).is_none() {
                    return Err(perr(format!("bad number `{p}`")));
                }
            }
            entries.push([
                parts[1].to_string(),
                parts[2].to_string(),
                parts[3].to_string(),
                parts[4].to_string(),
            ]);
        }
        let genus = genus.ok_or(Error::Parse {
            line: 0,
            message: "missing `# genus` header".into(),
        })?;
        Self::from_decimal(label.as_deref().unwrap_or("custom"), genus, entries, prec)
    }
}

fn decimal_generators(entries: &[[String; 4]], prec: Precision) -> Result<Vec<GroupElement>> {
    entries
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let vals = row
                .clone()
                .map(|s| prec.parse(&s).unwrap_or_else(|| prec.zero()));
            GroupElement::new(prec, vals, vec![k as i32 + 1])
        })
        .collect()
}
