//! Diagnostics for whether a local optimum is the global one: the EL
//! chi-square test on the profile ratio, the extreme-value upper confidence
//! bound of De Haan/Veall, and Jiang's studentized Bartlett-identity test.

use serde::Serialize;

use crate::dataset::Dataset;
use crate::el::{adjusted_pelr, profile_pelr, InnerSolveConfig, SolveStatus};
use crate::error::{Error, Result};
use crate::models::{EstimatingModel, ParametricModel};
use crate::numerics::special::{chisq_sf, normal_two_sided_p};
use crate::numerics::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    ElGlobal,
    Dehaan,
    Jiang,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RefDist {
    ChiSq { df: usize },
    StandardNormal,
    ExtremeValueInterval { l_max: f64, l_second: f64, l_p: f64 },
}

/// One test decision. `reject` means "this candidate is not the global
/// optimum" at level `alpha`; for the chi-square and normal tests the rule is
/// the strict comparison p_value < alpha, for the extreme-value test it is
/// candidate_value < L^p.
#[derive(Clone, Debug, Serialize)]
pub struct TestOutcome {
    pub method: TestMethod,
    pub statistic: f64,
    pub ref_dist: RefDist,
    pub p_value: Option<f64>,
    pub reject: bool,
    pub alpha: f64,
    pub note: Option<String>,
}

/// How the EL test evaluates the profile ratio at the tested point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElVariant {
    /// Plain profile EL; a hull failure rejects outright with p = 0.
    Plain,
    /// Plain profile EL, falling back to the adjusted EL on hull failure
    /// (recorded in the outcome note).
    PlainWithAelFallback,
    /// Adjusted EL throughout.
    Ael,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "alpha must be in (0,1) (got {alpha})"
        )));
    }
    Ok(())
}

/// Chi-square test of "theta is the global minimum of the profile EL ratio":
/// statistic 2 W_n(theta) against chi-square with m - q degrees of freedom.
/// Requires an over-determined model (m > q); at a genuine global minimum the
/// statistic is stochastically bounded, while at a spurious local minimum it
/// is inflated.
pub fn global_maximum_test(
    data: &Dataset,
    model: &EstimatingModel,
    theta: &[f64],
    alpha: f64,
    cfg: &InnerSolveConfig,
    variant: ElVariant,
) -> Result<TestOutcome> {
    check_alpha(alpha)?;
    if model.m() <= model.q() {
        return Err(Error::Unsupported(format!(
            "model {} is just-determined (m = q = {}): every estimating-equation root already \
             attains the EL maximum, so there is nothing to test",
            model.name(),
            model.m()
        )));
    }
    let df = model.m() - model.q();

    let mut note = None;
    let w = match variant {
        ElVariant::Ael => {
            let ev = adjusted_pelr(data, model, theta, cfg)?;
            note = Some("ael".to_string());
            ev.w_n
        }
        ElVariant::Plain | ElVariant::PlainWithAelFallback => {
            let ev = profile_pelr(data, model, theta, cfg)?;
            if ev.inner.status == SolveStatus::HullFailure {
                match variant {
                    ElVariant::PlainWithAelFallback => {
                        let adj = adjusted_pelr(data, model, theta, cfg)?;
                        note = Some("ael_fallback".to_string());
                        adj.w_n
                    }
                    _ => {
                        // No multiplier exists at theta: reject outright.
                        return Ok(TestOutcome {
                            method: TestMethod::ElGlobal,
                            statistic: f64::INFINITY,
                            ref_dist: RefDist::ChiSq { df },
                            p_value: Some(0.0),
                            reject: true,
                            alpha,
                            note: Some("hull failure at theta; no AEL fallback".to_string()),
                        });
                    }
                }
            } else {
                ev.w_n
            }
        }
    };

    let statistic = 2.0 * w;
    let p = if statistic.is_finite() {
        chisq_sf(statistic, df)?
    } else {
        0.0
    };
    Ok(TestOutcome {
        method: TestMethod::ElGlobal,
        statistic,
        ref_dist: RefDist::ChiSq { df },
        p_value: Some(p),
        reject: p < alpha,
        alpha,
        note,
    })
}

/// Extreme-value upper confidence bound for the supremum of a maximized
/// objective. Draws `draws` parameter values uniformly on the box, forms
/// L^p = L_(m) + (L_(m) - L_(m-1)) / (p^(-2/q) - 1) from the two largest
/// objective values (q = dim theta = 1 here, p = alpha), and rejects the
/// candidate when its objective value falls below L^p.
pub fn dehaan_test(
    objective: impl Fn(f64) -> f64,
    candidate_value: f64,
    bounds: (f64, f64),
    draws: usize,
    alpha: f64,
    rng: &mut RngStream,
) -> Result<TestOutcome> {
    check_alpha(alpha)?;
    let (lo, hi) = bounds;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!(
            "De Haan box must be bounded with lo < hi (got [{lo}, {hi}])"
        )));
    }
    if draws < 2 {
        return Err(Error::domain("De Haan test needs at least two draws"));
    }
    let mut l_max = f64::NEG_INFINITY;
    let mut l_second = f64::NEG_INFINITY;
    for _ in 0..draws {
        let theta = rng.uniform_in(lo, hi);
        let v = objective(theta);
        if v.is_nan() {
            continue;
        }
        if v > l_max {
            l_second = l_max;
            l_max = v;
        } else if v > l_second {
            l_second = v;
        }
    }
    let q_dim = 1.0;
    let (l_p, note) = if l_max == l_second || !l_second.is_finite() {
        (
            l_max,
            Some("degenerate interval: two largest draws coincide".to_string()),
        )
    } else {
        (
            l_max + (l_max - l_second) / (alpha.powf(-2.0 / q_dim) - 1.0),
            None,
        )
    };
    Ok(TestOutcome {
        method: TestMethod::Dehaan,
        statistic: candidate_value,
        ref_dist: RefDist::ExtremeValueInterval {
            l_max,
            l_second,
            l_p,
        },
        p_value: None,
        reject: candidate_value < l_p,
        alpha,
        note,
    })
}

/// Jiang's test: the studentized mean of the Bartlett-identity function,
/// T_n = sum phi(x_i; theta) / (sqrt(n) sigma_hat(theta)), against the
/// standard normal (two-sided). The variance estimate fills the formula
/// sigma^2 = E[phi^2] + I^{-1} (2 E[s phi] E[phi'] + E[phi']^2) with sample
/// moments (phi' by central finite differences); the Fisher information is
/// the model's closed form when it has one, otherwise the sample variance of
/// the score.
pub fn jiang_test(
    data: &Dataset,
    model: &ParametricModel,
    theta: f64,
    alpha: f64,
) -> Result<TestOutcome> {
    check_alpha(alpha)?;
    if !model.has_bartlett_phi() {
        return Err(Error::Unsupported(format!(
            "model {} does not supply score and bartlett_phi",
            model.name()
        )));
    }
    let n = data.n();
    let nf = n as f64;
    let h = 1e-5 * (1.0 + theta.abs());

    let mut sum_phi = 0.0;
    let mut sum_phi2 = 0.0;
    let mut sum_s = 0.0;
    let mut sum_s2 = 0.0;
    let mut sum_sphi = 0.0;
    let mut sum_dphi = 0.0;
    for obs in data.rows() {
        let s = model.score(obs, theta)?;
        let phi = model.bartlett_phi(obs, theta)?;
        let dphi =
            (model.bartlett_phi(obs, theta + h)? - model.bartlett_phi(obs, theta - h)?) / (2.0 * h);
        sum_phi += phi;
        sum_phi2 += phi * phi;
        sum_s += s;
        sum_s2 += s * s;
        sum_sphi += s * phi;
        sum_dphi += dphi;
    }
    let info = match model.fisher_information(theta) {
        Some(i) => i?,
        None => sum_s2 / nf - (sum_s / nf) * (sum_s / nf),
    };
    if !(info > 0.0) {
        return Err(Error::Inconclusive(format!(
            "Fisher information estimate is not positive ({info})"
        )));
    }
    let e_phi2 = sum_phi2 / nf;
    let e_sphi = sum_sphi / nf;
    let e_dphi = sum_dphi / nf;
    let sigma2 = e_phi2 + (2.0 * e_sphi * e_dphi + e_dphi * e_dphi) / info;
    if !(sigma2 > 0.0) {
        return Err(Error::Inconclusive(format!(
            "variance estimate is not positive ({sigma2})"
        )));
    }
    let statistic = sum_phi / (nf.sqrt() * sigma2.sqrt());
    let p = normal_two_sided_p(statistic);
    Ok(TestOutcome {
        method: TestMethod::Jiang,
        statistic,
        ref_dist: RefDist::StandardNormal,
        p_value: Some(p),
        reject: p < alpha,
        alpha,
        note: None,
    })
}
