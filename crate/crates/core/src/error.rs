use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "density is singular at z = 0 for the {model} measure; use the near-origin moment instead"
    )]
    SingularAtOrigin { model: &'static str },

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("refusing to assemble integral operator: {0}")]
    Inadmissible(String),

    #[error("penalty iteration did not converge at tau = {tau}: max update {max_update:e} at node {node}")]
    PenaltyNotConverged {
        tau: f64,
        node: usize,
        max_update: f64,
    },

    #[error("scheme unstable: max norm grew from {before:e} to {after:e} at step {step}")]
    Unstable {
        step: usize,
        before: f64,
        after: f64,
    },

    #[error("unsupported model for {what}: {model}")]
    Unsupported {
        what: &'static str,
        model: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
