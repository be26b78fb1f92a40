use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    /// The denominator of the boundary-matching constant M is too close to zero.
    #[error("resonant depth: M denominator {denominator:e} below tolerance {tolerance:e}")]
    ResonantDepth { denominator: f64, tolerance: f64 },

    #[error("z = {z} lies outside the ocean column [0, {depth}]")]
    DomainError { z: f64, depth: f64 },

    #[error("superposed modes have different wavenumbers ({expected} vs {found})")]
    MixedWavenumbers { expected: f64, found: f64 },

    #[error("mode wavenumber {mode} does not match family wavenumber {family}")]
    WavenumberMismatch { mode: f64, family: f64 },

    #[error("bessel J_{order}({x}) is outside the supported envelope (order <= 50, |x| <= 1e4)")]
    OutOfEnvelope { order: u32, x: f64 },

    #[error("at (t, x, y, z) = ({}, {}, {}, {}): {source}", .point[0], .point[1], .point[2], .point[3])]
    AtPoint {
        point: [f64; 4],
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Strips any point context, returning the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            other => other,
        }
    }

    /// Short machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self.root() {
            Error::BadParameter(_) => "BadParameter",
            Error::ConstraintViolation(_) => "ConstraintViolation",
            Error::ResonantDepth { .. } => "ResonantDepth",
            Error::DomainError { .. } => "DomainError",
            Error::MixedWavenumbers { .. } => "MixedWavenumbers",
            Error::WavenumberMismatch { .. } => "WavenumberMismatch",
            Error::OutOfEnvelope { .. } => "OutOfEnvelope",
            Error::Io { .. } => "Io",
            Error::AtPoint { .. } => unreachable!(),
        }
    }
}
