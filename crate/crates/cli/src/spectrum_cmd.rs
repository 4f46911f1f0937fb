//! The cached length spectrum.

use std::path::PathBuf;

use selberg_core::fuchsian::{length_spectrum, parse_spectrum_file, LengthSpectrum};
use sha2::{Digest, Sha256};

use crate::config::{read, write, RunConfig};
use crate::error::{CliError, CliResult};

/// Cache file name: group label plus the first 16 hex digits of a hash of the
/// generator bytes, the cutoff and the precision.
pub fn cache_path(cfg: &RunConfig, label: &str, content: &[u8]) -> PathBuf {
    let mut hasher = Sha256::new();
    hasher.update(content);
    hasher.update(b"|Lmax=");
    hasher.update(cfg.l_max.as_bytes());
    hasher.update(b"|precision=");
    hasher.update(cfg.precision.digits().to_string().as_bytes());
    let digest = hex::encode(hasher.finalize());
    let safe: String = label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    cfg.output_dir
        .join(format!("spectrum-{safe}-{}.txt", &digest[..16]))
}

pub struct CachedSpectrum {
    pub path: PathBuf,
    pub spectrum: LengthSpectrum,
    pub from_cache: bool,
}

/// Loads the spectrum file, computing and writing it first when it is
/// missing, unreadable or `--force` is set. The returned spectrum is always
/// the parsed file, so fresh and cached runs see identical data.
pub fn ensure_spectrum(cfg: &RunConfig) -> CliResult<CachedSpectrum> {
    let group = cfg.load_group()?;
    let path = cache_path(cfg, group.label(), &group.content_bytes());
    if !cfg.force && path.exists() {
        if let Ok(spectrum) = parse_spectrum_file(&read(&path)?) {
            return Ok(CachedSpectrum {
                path,
                spectrum,
                from_cache: true,
            });
        }
    }
    let l_max = cfg
        .precision
        .parse(&cfg.l_max)
        .ok_or_else(|| CliError::Config(format!("bad --Lmax `{}`", cfg.l_max)))?;
    let computed = length_spectrum(&group, &l_max, None)?;
    if let Some(w) = &computed.warning {
        eprintln!("warning: {w}");
    }
    if let Some(s) = &computed.stats {
        eprintln!(
            "searched {} elements to radius {:.4}; {} candidates, {} classes, {} primitive",
            s.elements, s.search_radius, s.candidates, s.classes, s.primitive_classes
        );
    }
    let text = computed.to_file_string();
    cfg.ensure_output_dir()?;
    write(&path, &text)?;
    Ok(CachedSpectrum {
        path,
        spectrum: parse_spectrum_file(&text)?,
        from_cache: false,
    })
}

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let cached = ensure_spectrum(cfg)?;
    let s = &cached.spectrum;
    eprintln!(
        "{} {} classes in {} entries below {}",
        if cached.from_cache {
            "loaded"
        } else {
            "computed"
        },
        s.class_count(),
        s.geodesics.len(),
        cfg.l_max
    );
    println!("{}", cached.path.display());
    Ok(())
}
