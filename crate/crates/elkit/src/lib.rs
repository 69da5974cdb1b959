//! Empirical-likelihood inference with estimating functions.
//!
//! The crate profiles the empirical likelihood over a scalar parameter,
//! selects the global minimum of the profile ratio (the MELE), tests whether
//! a given local optimum is the global one, and reproduces the reference
//! Monte Carlo tables through a deterministic, seeded scenario runner.
//!
//! Layers, bottom up:
//!
//! - [`numerics`]: seeded random streams, the regularized incomplete gamma
//!   family, summary statistics.
//! - [`el`]: the inner Lagrange dual solve and the (adjusted) profile EL
//!   ratio W_n at a fixed parameter value.
//! - [`models`]: the estimating-function catalog, the stacking combinator,
//!   and the parametric baselines.
//! - [`optimize`]: grid scan, golden-section refinement of local minima,
//!   global selection (MELE/MLE), and estimating-equation root census.
//! - [`gmtests`]: the EL chi-square global-maximum test, the De Haan/Veall
//!   extreme-value bound, and Jiang's Bartlett-identity test.
//! - [`experiments`]: declarative Monte Carlo scenarios and report I/O.

// Validation predicates are written as negated comparisons (e.g. `!(x > 0.0)`)
// so that NaN inputs fail them and surface as domain errors.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataset;
pub mod el;
pub mod error;
pub mod experiments;
pub mod gmtests;
pub mod models;
pub mod numerics;
pub mod optimize;

pub use dataset::Dataset;
pub use error::{Error, Result};
