use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Pricing {
        context: String,
        source: levy_pide::Error,
    },
}

impl From<levy_pide::Error> for CliError {
    fn from(source: levy_pide::Error) -> Self {
        Self::Pricing {
            context: "invalid configuration".into(),
            source,
        }
    }
}

impl CliError {
    /// 1 for anything the user can fix in the configuration, 2 when the
    /// numerics fail on a valid configuration.
    pub fn exit_code(&self) -> i32 {
        use levy_pide::Error as E;
        match self {
            Self::Config(_) | Self::Read { .. } | Self::Write { .. } => 1,
            Self::Pricing { source, .. } => match source {
                E::InvalidParameter { .. } | E::Domain(_) | E::Unsupported { .. } | E::Inadmissible(_) => 1,
                E::SingularAtOrigin { .. }
                | E::Divergent(_)
                | E::Quadrature(_)
                | E::PenaltyNotConverged { .. }
                | E::Unstable { .. } => 2,
            },
        }
    }
}
