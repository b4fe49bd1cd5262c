use thiserror::Error;

use crate::chebyshev::ChebKind;
use crate::measures::MomentKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series kinds differ: {0:?} vs {1:?}")]
    KindMismatch(ChebKind, ChebKind),

    #[error("index out of range: n0 = {n0}, k0 = {k0} (need 1 <= k0 <= n0 <= {max})")]
    IndexOutOfRange { n0: usize, k0: usize, max: usize },

    #[error("interpolation system ill-conditioned: residual {residual:.3e} exceeds {limit:.0e}")]
    IllConditioned { residual: f64, limit: f64 },

    #[error("moment kind {found:?} does not match the required {expected:?}")]
    MomentKindMismatch { expected: MomentKind, found: MomentKind },

    #[error("need moments up to order {needed}, only {available} available")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("eigenvalue iteration did not converge at index {index}")]
    NoConvergence { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
