//! Deterministic variate generation, special functions, and summary statistics.

pub mod rng;
pub mod special;
pub mod stats;

pub use rng::{sample, DistributionSpec, RngStream};
pub use special::{
    chisq_cdf, chisq_sf, ln_gamma, normal_two_sided_p, reg_inc_gamma_p, reg_inc_gamma_q,
};
pub use stats::{median, quantile, summarize, Summary};
