//! Numerical analysis of Gaussian-randomized-smoothed classifiers on
//! canonical decision regions: smoothed probabilities (closed form or
//! deterministic quadrature), shrinkage/vanishing thresholds, certified
//! radii, synthetic-dataset accuracy, mutual-information curves, and a
//! seeded Monte Carlo cross-check.

pub mod boundary;
pub mod certify;
pub mod curve;
pub mod error;
pub mod mc;
pub mod quad;
pub mod regions;
pub mod smoothprob;
pub mod specfn;
pub mod sweep;
pub mod synthetic;
pub mod thresholds;

pub use error::{Error, Result};
pub use specfn::Probability;
