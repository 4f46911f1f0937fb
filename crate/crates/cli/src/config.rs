//! Validated run configuration and the inputs it names.

use std::fs;
use std::path::{Path, PathBuf};

use selberg_core::divisor::LaplaceSpectrum;
use selberg_core::fuchsian::{bolza_group, FuchsianGroup};
use selberg_core::precision::MIN_DIGITS;
use selberg_core::Precision;

use crate::args::Cli;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSource {
    Bolza,
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub precision: Precision,
    pub group: GroupSource,
    pub genus: u32,
    /// The cutoff as typed, re-parsed at the working precision when needed.
    pub l_max: String,
    pub k_max: u32,
    pub spectrum_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub force: bool,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        if cli.precision < MIN_DIGITS {
            return Err(CliError::Config(format!(
                "--precision must be at least {MIN_DIGITS}, got {}",
                cli.precision
            )));
        }
        if cli.genus < 2 {
            return Err(CliError::Config(format!(
                "--genus must be at least 2, got {}",
                cli.genus
            )));
        }
        if cli.k_max < 1 {
            return Err(CliError::Config("--Kmax must be at least 1".into()));
        }
        let l_max = cli.l_max.trim().to_string();
        match l_max.parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => {}
            _ => {
                return Err(CliError::Config(format!(
                    "--Lmax must be a positive number, got `{l_max}`"
                )))
            }
        }
        let group = if cli.group == "bolza" {
            GroupSource::Bolza
        } else {
            GroupSource::File(PathBuf::from(&cli.group))
        };
        Ok(Self {
            precision: Precision::new(cli.precision),
            group,
            genus: cli.genus,
            l_max,
            k_max: cli.k_max,
            spectrum_path: cli.spectrum.clone(),
            output_dir: cli.out.clone(),
            force: cli.force,
        })
    }

    pub fn load_group(&self) -> CliResult<FuchsianGroup> {
        match &self.group {
            GroupSource::Bolza if self.genus != 2 => {
                Err(CliError::Config("the Bolza group has genus 2".into()))
            }
            GroupSource::Bolza => Ok(bolza_group(self.precision)),
            GroupSource::File(path) => {
                let mut text = read(path)?;
                let has_genus = text.lines().any(|l| {
                    l.trim()
                        .strip_prefix('#')
                        .is_some_and(|r| r.trim_start().starts_with("genus"))
                });
                if !has_genus {
                    text = format!("# genus {}\n{text}", self.genus);
                }
                Ok(FuchsianGroup::parse_generator_file(&text, self.precision)?)
            }
        }
    }

    pub fn load_laplace_spectrum(&self) -> CliResult<Option<LaplaceSpectrum>> {
        match &self.spectrum_path {
            None => Ok(None),
            Some(path) => Ok(Some(LaplaceSpectrum::parse(&read(path)?)?)),
        }
    }

    pub fn ensure_output_dir(&self) -> CliResult<()> {
        fs::create_dir_all(&self.output_dir).map_err(|source| CliError::Write {
            path: self.output_dir.clone(),
            source,
        })
    }
}

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}
