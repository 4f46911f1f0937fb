use std::path::PathBuf;

use thiserror::Error;

/// Exit status for precondition violations: bad flags, missing inputs,
/// parameters the mathematics refuses.
pub const EXIT_PRECONDITION: u8 = 2;
/// Exit status for failed verification and internal errors.
pub const EXIT_FAILURE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] selberg_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("suite `{suite}` needs {what}")]
    MissingInput {
        suite: &'static str,
        what: &'static str,
    },

    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("suite `{suite}`: {failed} of {total} checks failed")]
    ChecksFailed {
        suite: &'static str,
        failed: usize,
        total: usize,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use selberg_core::Error as E;
        match self {
            Self::Core(e) => match e {
                E::InvalidInput(_)
                | E::Parse { .. }
                | E::OutsideConvergence { .. }
                | E::UnsupportedLambda
                | E::UnknownSpectralRegion { .. }
                | E::DivergentTail { .. }
                | E::IncompleteBall(_)
                | E::InsufficientSamples(_)
                | E::PoleHit(_)
                | E::NotHyperbolic
                | E::NotUnimodular { .. } => EXIT_PRECONDITION,
                E::IndeterminateClass { .. }
                | E::PrecisionExhausted { .. }
                | E::InconclusivePrimitivity { .. }
                | E::FundamentalDomain(_) => EXIT_FAILURE,
            },
            Self::Config(_) | Self::MissingInput { .. } | Self::Read { .. } => EXIT_PRECONDITION,
            Self::Write { .. } | Self::ChecksFailed { .. } => EXIT_FAILURE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;
    use selberg_core::Error as E;

    #[test]
    fn exit_codes() {
        assert_eq!(
            CliError::from(E::UnsupportedLambda).exit_code(),
            EXIT_PRECONDITION
        );
        assert_eq!(
            CliError::from(E::DivergentTail { bound: 1.0 }).exit_code(),
            EXIT_PRECONDITION
        );
        assert_eq!(
            CliError::from(E::IndeterminateClass { excess: 0.0 }).exit_code(),
            EXIT_FAILURE
        );
        let failed = CliError::ChecksFailed {
            suite: "les",
            failed: 1,
            total: 2,
        };
        assert_eq!(failed.exit_code(), EXIT_FAILURE);
        assert_eq!(
            CliError::Config(String::new()).exit_code(),
            EXIT_PRECONDITION
        );
    }
}
