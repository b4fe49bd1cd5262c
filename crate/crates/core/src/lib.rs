//! Discrepancy bounds for measures on `[−1, 1]` and on the circle against the
//! arcsine and semicircle laws.
//!
//! The central object is the Chebyshev–Markov–Stieltjes envelope: a pair of
//! polynomials squeezing the indicator of a half-line, whose Chebyshev
//! coefficients turn the moments of a measure into a rigorous bound on its
//! tail discrepancy. Around it sit Erdős–Turán type inequalities, measure
//! utilities, and Monte-Carlo checks of the semicircle law for Wigner
//! matrices.

pub mod bounds;
pub mod chebyshev;
pub mod cli;
pub mod envelope;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod wigner;

#[cfg(test)]
mod oracle;

pub use bounds::{
    calibrate_k, cms_bound_at, et_circle, et_interval_t, et_interval_u, rho, BoundReport,
    Calibration, CmsBounder, CALIBRATED_K,
};
pub use chebyshev::{cheb_eval, cheb_zeros, gauss_rule, ChebKind, ChebSeries, QuadratureRule};
pub use envelope::{build_envelope, discrepancy_bound, CmsEnvelope, EnvelopeFamily};
pub use error::{Error, Result};
pub use measures::{
    circle_to_interval, fourier, moments, true_discrepancy, DiscreteMeasure, Domain, MomentKind,
    MomentSequence,
};
pub use wigner::{EnsembleConfig, EntryModel, ExperimentResult, SpectrumSample};
