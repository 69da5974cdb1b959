//! Catalog of estimating functions and parametric log-likelihoods, plus the
//! stacking combinator that augments an estimating function with additional
//! unbiased components.
//!
//! Estimating models evaluate an m-dimensional function g(x; theta) with
//! E[g(X; theta*)] = 0 at the true parameter. All catalog entries have a
//! scalar parameter (q = 1). Models are immutable after construction and
//! evaluation is pure, so they are safe to share across threads.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Standard normal density at z.
fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_2PI
}

/// Real cube root, odd in its argument: sign(u) * |u|^(1/3).
fn signed_cbrt(u: f64) -> f64 {
    u.cbrt()
}

/// Guard band around the theta = 0 pole of the curved-normal score.
pub const CURVED_POLE_BAND: f64 = 1e-6;

type EvalFn = dyn Fn(&[f64], &[f64], &mut [f64]) -> Result<()> + Send + Sync;

/// An m-dimensional estimating function of a q-dimensional parameter.
#[derive(Clone)]
pub struct EstimatingModel {
    name: String,
    m: usize,
    q: usize,
    obs_dim: usize,
    known_constants: Vec<(String, f64)>,
    eval: Arc<EvalFn>,
}

impl std::fmt::Debug for EstimatingModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EstimatingModel")
            .field("name", &self.name)
            .field("m", &self.m)
            .field("q", &self.q)
            .field("obs_dim", &self.obs_dim)
            .finish()
    }
}

impl EstimatingModel {
    pub fn new(
        name: impl Into<String>,
        m: usize,
        q: usize,
        obs_dim: usize,
        known_constants: Vec<(String, f64)>,
        eval: impl Fn(&[f64], &[f64], &mut [f64]) -> Result<()> + Send + Sync + 'static,
    ) -> Self {
        assert!(m >= 1 && q >= 1 && obs_dim >= 1);
        EstimatingModel {
            name: name.into(),
            m,
            q,
            obs_dim,
            known_constants,
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    pub fn known_constants(&self) -> &[(String, f64)] {
        &self.known_constants
    }

    /// Evaluate g(obs; theta) into `out` (length m).
    pub fn eval_into(&self, obs: &[f64], theta: &[f64], out: &mut [f64]) -> Result<()> {
        if obs.len() != self.obs_dim {
            return Err(Error::domain(format!(
                "model {} expects obs_dim {}, got {}",
                self.name,
                self.obs_dim,
                obs.len()
            )));
        }
        if theta.len() != self.q {
            return Err(Error::domain(format!(
                "model {} expects q = {}, got theta of length {}",
                self.name,
                self.q,
                theta.len()
            )));
        }
        debug_assert_eq!(out.len(), self.m);
        (self.eval)(obs, theta, out)
    }

    pub fn eval(&self, obs: &[f64], theta: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.m];
        self.eval_into(obs, theta, &mut out)?;
        Ok(out)
    }

    /// Model with the component at `index` multiplied by `factor`.
    /// The profile EL ratio is invariant under such rescalings.
    pub fn scale_component(&self, index: usize, factor: f64) -> Self {
        assert!(index < self.m);
        let inner = self.clone();
        EstimatingModel::new(
            format!("{}*", self.name),
            self.m,
            self.q,
            self.obs_dim,
            self.known_constants.clone(),
            move |obs, theta, out| {
                inner.eval_into(obs, theta, out)?;
                out[index] *= factor;
                Ok(())
            },
        )
    }
}

/// Concatenate two estimating functions over the same observation and
/// parameter spaces into one of dimension `a.m + b.m`.
pub fn stack(a: &EstimatingModel, b: &EstimatingModel) -> Result<EstimatingModel> {
    if a.obs_dim != b.obs_dim {
        return Err(Error::domain(format!(
            "stack requires equal obs_dim ({} vs {})",
            a.obs_dim, b.obs_dim
        )));
    }
    if a.q != b.q {
        return Err(Error::domain(format!(
            "stack requires equal q ({} vs {})",
            a.q, b.q
        )));
    }
    let (ma, m) = (a.m, a.m + b.m);
    let (fa, fb) = (a.clone(), b.clone());
    let mut constants = a.known_constants.clone();
    constants.extend(b.known_constants.iter().cloned());
    Ok(EstimatingModel::new(
        format!("{}+{}", a.name, b.name),
        m,
        a.q,
        a.obs_dim,
        constants,
        move |obs, theta, out| {
            fa.eval_into(obs, theta, &mut out[..ma])?;
            fb.eval_into(obs, theta, &mut out[ma..])
        },
    ))
}

/// g = x - theta (population mean), m = q = 1.
pub fn mean_model() -> EstimatingModel {
    EstimatingModel::new("mean", 1, 1, 1, vec![], |obs, theta, out| {
        out[0] = obs[0] - theta[0];
        Ok(())
    })
}

/// g = (x - theta, x^2 - theta - theta^2) for a population with equal mean
/// and variance, m = 2, q = 1.
pub fn mean_var_equal_model() -> EstimatingModel {
    EstimatingModel::new("mean-var", 2, 1, 1, vec![], |obs, theta, out| {
        let (x, t) = (obs[0], theta[0]);
        out[0] = x - t;
        out[1] = x * x - t - t * t;
        Ok(())
    })
}

/// Cauchy location score, g = (x - theta) / (1 + (x - theta)^2).
pub fn cauchy_score_model() -> EstimatingModel {
    EstimatingModel::new("cauchy-score", 1, 1, 1, vec![], |obs, theta, out| {
        let r = obs[0] - theta[0];
        out[0] = r / (1.0 + r * r);
        Ok(())
    })
}

/// Cauchy score stacked with the signed cube root (x - theta)^(1/3); the
/// second component keeps the function from degenerating at large |theta|,
/// making the global minimum of the profile EL ratio consistent.
pub fn cauchy_remedy_model() -> EstimatingModel {
    EstimatingModel::new("cauchy-remedy", 2, 1, 1, vec![], |obs, theta, out| {
        let r = obs[0] - theta[0];
        out[0] = r / (1.0 + r * r);
        out[1] = signed_cbrt(r);
        Ok(())
    })
}

/// Least-squares gradient of the regression y = theta + theta^2 x + eps:
/// g1 = (1 + 2 theta x)(y - theta - theta^2 x), m = q = 1. Observations (x, y).
pub fn nlr_score_model() -> EstimatingModel {
    EstimatingModel::new("nlr-score", 1, 1, 2, vec![], |obs, theta, out| {
        let (x, y, t) = (obs[0], obs[1], theta[0]);
        out[0] = (1.0 + 2.0 * t * x) * (y - t - t * t * x);
        Ok(())
    })
}

/// Restricted-linear-regression form (y - theta - theta^2 x, x(y - theta - theta^2 x)),
/// m = 2, q = 1, over-determined. Observations (x, y).
pub fn nlr_remedy_model() -> EstimatingModel {
    EstimatingModel::new("nlr-remedy", 2, 1, 2, vec![], |obs, theta, out| {
        let (x, y, t) = (obs[0], obs[1], theta[0]);
        let r = y - t - t * t * x;
        out[0] = r;
        out[1] = x * r;
        Ok(())
    })
}

/// Score of the N(theta, theta^2) family: x^2/theta^3 - x/theta^2 - 1/theta.
/// theta inside the guard band around the pole at 0 is a domain error.
pub fn curved_normal_score_model() -> EstimatingModel {
    EstimatingModel::new("curved-score", 1, 1, 1, vec![], |obs, theta, out| {
        let (x, t) = (obs[0], theta[0]);
        if t.abs() < CURVED_POLE_BAND {
            return Err(Error::domain(format!(
                "curved-normal score has a pole at theta = 0 (got {t})"
            )));
        }
        out[0] = x * x / (t * t * t) - x / (t * t) - 1.0 / t;
        Ok(())
    })
}

/// Regular-exponential-family scores for N(theta, theta^2): (x - theta, x^2 - 2 theta^2),
/// m = 2, q = 1.
pub fn curved_normal_remedy_model() -> EstimatingModel {
    EstimatingModel::new("curved-remedy", 2, 1, 1, vec![], |obs, theta, out| {
        let (x, t) = (obs[0], theta[0]);
        out[0] = x - t;
        out[1] = x * x - 2.0 * t * t;
        Ok(())
    })
}

/// Two-component normal mixture with density
/// f(x; theta) = pi/s1 phi((x-theta)/s1) + (1-pi)/s2 phi((x-mu2)/s2),
/// where only the first component centre theta is unknown.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixtureParams {
    pub pi: f64,
    pub mu2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

/// Parameters used throughout the mixture experiments.
pub const MIXTURE_DEFAULT: MixtureParams = MixtureParams {
    pi: 0.4,
    mu2: 10.0,
    sigma1: 1.0,
    sigma2: 4.0,
};

impl MixtureParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.pi > 0.0 && self.pi < 1.0) {
            return Err(Error::domain(format!(
                "mixing proportion must be in (0,1) (got {})",
                self.pi
            )));
        }
        if !(self.sigma1 > 0.0 && self.sigma2 > 0.0) {
            return Err(Error::domain(
                "mixture standard deviations must be positive",
            ));
        }
        Ok(())
    }

    pub fn density(&self, x: f64, theta: f64) -> f64 {
        self.pi / self.sigma1 * std_normal_pdf((x - theta) / self.sigma1)
            + (1.0 - self.pi) / self.sigma2 * std_normal_pdf((x - self.mu2) / self.sigma2)
    }

    fn constants(&self) -> Vec<(String, f64)> {
        vec![
            ("pi".to_string(), self.pi),
            ("mu2".to_string(), self.mu2),
            ("sigma1_sq".to_string(), self.sigma1 * self.sigma1),
            ("sigma2_sq".to_string(), self.sigma2 * self.sigma2),
        ]
    }
}

/// The three mixture estimating functions: the score in theta alone (m = 1),
/// the score stacked with the Bartlett-identity function phi (m = 2), and the
/// three-score variant (s(x;theta), s(x;mu2), s(x;p)) with mu2 and pi frozen
/// at their known values (m = 3).
#[derive(Clone, Debug)]
pub struct MixtureModels {
    pub score: EstimatingModel,
    pub score_phi: EstimatingModel,
    pub three_score: EstimatingModel,
}

pub fn mixture_models(params: MixtureParams) -> Result<MixtureModels> {
    params.validate()?;
    let p = params;

    let score = EstimatingModel::new(
        "mixture-score",
        1,
        1,
        1,
        p.constants(),
        move |obs, theta, out| {
            let (x, t) = (obs[0], theta[0]);
            let f = p.density(x, t);
            out[0] = (x - t) * std_normal_pdf((x - t) / p.sigma1) / f;
            Ok(())
        },
    );

    let score_phi = EstimatingModel::new(
        "mixture-score-phi",
        2,
        1,
        1,
        p.constants(),
        move |obs, theta, out| {
            let (x, t) = (obs[0], theta[0]);
            let f = p.density(x, t);
            let phi1 = std_normal_pdf((x - t) / p.sigma1);
            out[0] = (x - t) * phi1 / f;
            out[1] = ((x - t) * (x - t) - p.sigma1 * p.sigma1) * phi1 / f;
            Ok(())
        },
    );

    let three_score = EstimatingModel::new(
        "mixture-three-score",
        3,
        1,
        1,
        p.constants(),
        move |obs, theta, out| {
            let (x, t) = (obs[0], theta[0]);
            let f = p.density(x, t);
            let phi1 = std_normal_pdf((x - t) / p.sigma1);
            let phi2 = std_normal_pdf((x - p.mu2) / p.sigma2);
            out[0] = (x - t) * phi1 / f;
            out[1] = (x - p.mu2) * phi2 / f;
            out[2] = (p.sigma2 * phi1 - p.sigma1 * phi2) / f;
            Ok(())
        },
    );

    Ok(MixtureModels {
        score,
        score_phi,
        three_score,
    })
}

/// Moment conditions of the asset-price example:
/// g1 = exp(-0.72 - theta (x1 + x2) + 3 x2) - 1, g2 = x2 g1. Observations (x1, x2).
pub fn asset_pricing_model() -> EstimatingModel {
    EstimatingModel::new("asset-pricing", 2, 1, 2, vec![], |obs, theta, out| {
        let (x1, x2, t) = (obs[0], obs[1], theta[0]);
        let e = (-0.72 - t * (x1 + x2) + 3.0 * x2).exp() - 1.0;
        out[0] = e;
        out[1] = x2 * e;
        Ok(())
    })
}

/// Look up an estimating model by its stable CLI identifier.
pub fn by_id(id: &str) -> Result<EstimatingModel> {
    match id {
        "mean" => Ok(mean_model()),
        "mean-var" => Ok(mean_var_equal_model()),
        "cauchy-score" => Ok(cauchy_score_model()),
        "cauchy-remedy" => Ok(cauchy_remedy_model()),
        "nlr-score" => Ok(nlr_score_model()),
        "nlr-remedy" => Ok(nlr_remedy_model()),
        "curved-score" => Ok(curved_normal_score_model()),
        "curved-remedy" => Ok(curved_normal_remedy_model()),
        "mixture-score" => Ok(mixture_models(MIXTURE_DEFAULT)?.score),
        "mixture-score-phi" => Ok(mixture_models(MIXTURE_DEFAULT)?.score_phi),
        "mixture-three-score" => Ok(mixture_models(MIXTURE_DEFAULT)?.three_score),
        "asset-pricing" => Ok(asset_pricing_model()),
        other => Err(Error::domain(format!("unknown model id '{other}'"))),
    }
}

pub const MODEL_IDS: [&str; 12] = [
    "mean",
    "mean-var",
    "cauchy-score",
    "cauchy-remedy",
    "nlr-score",
    "nlr-remedy",
    "curved-score",
    "curved-remedy",
    "mixture-score",
    "mixture-score-phi",
    "mixture-three-score",
    "asset-pricing",
];

type ScalarFn = dyn Fn(&[f64], f64) -> Result<f64> + Send + Sync;
type ThetaFn = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// A parametric log-likelihood with its score and, where a test needs it, the
/// Bartlett-identity function phi = score^2 + d(score)/d(theta), plus the
/// analytic Fisher information when the family has one in closed form.
#[derive(Clone)]
pub struct ParametricModel {
    name: String,
    obs_dim: usize,
    logpdf: Arc<ScalarFn>,
    score: Arc<ScalarFn>,
    bartlett_phi: Option<Arc<ScalarFn>>,
    fisher_information: Option<Arc<ThetaFn>>,
}

impl std::fmt::Debug for ParametricModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParametricModel")
            .field("name", &self.name)
            .field("obs_dim", &self.obs_dim)
            .field("has_bartlett_phi", &self.bartlett_phi.is_some())
            .finish()
    }
}

impl ParametricModel {
    pub fn new(
        name: impl Into<String>,
        obs_dim: usize,
        logpdf: impl Fn(&[f64], f64) -> Result<f64> + Send + Sync + 'static,
        score: impl Fn(&[f64], f64) -> Result<f64> + Send + Sync + 'static,
        bartlett_phi: Option<Arc<ScalarFn>>,
    ) -> Self {
        ParametricModel {
            name: name.into(),
            obs_dim,
            logpdf: Arc::new(logpdf),
            score: Arc::new(score),
            bartlett_phi,
            fisher_information: None,
        }
    }

    /// Attach a closed-form Fisher information function I(theta).
    pub fn with_fisher_information(
        mut self,
        info: impl Fn(f64) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        self.fisher_information = Some(Arc::new(info));
        self
    }

    /// Analytic Fisher information at theta, when the family supplies one.
    pub fn fisher_information(&self, theta: f64) -> Option<Result<f64>> {
        self.fisher_information.as_ref().map(|f| f(theta))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    pub fn logpdf(&self, obs: &[f64], theta: f64) -> Result<f64> {
        (self.logpdf)(obs, theta)
    }

    pub fn score(&self, obs: &[f64], theta: f64) -> Result<f64> {
        (self.score)(obs, theta)
    }

    pub fn has_bartlett_phi(&self) -> bool {
        self.bartlett_phi.is_some()
    }

    pub fn bartlett_phi(&self, obs: &[f64], theta: f64) -> Result<f64> {
        match &self.bartlett_phi {
            Some(f) => f(obs, theta),
            None => Err(Error::Unsupported(format!(
                "model {} does not supply a Bartlett-identity function",
                self.name
            ))),
        }
    }

    /// Model whose phi is negated; the studentized Bartlett statistic flips
    /// sign while its two-sided p-value is unchanged.
    pub fn negate_phi(&self) -> Self {
        let inner = self.clone();
        let phi = self.bartlett_phi.clone().map(|f| {
            let f2: Arc<ScalarFn> = Arc::new(move |obs: &[f64], t: f64| f(obs, t).map(|v| -v));
            f2
        });
        ParametricModel {
            name: format!("{}-negphi", inner.name),
            obs_dim: inner.obs_dim,
            logpdf: inner.logpdf.clone(),
            score: inner.score.clone(),
            bartlett_phi: phi,
            fisher_information: inner.fisher_information.clone(),
        }
    }
}

/// Cauchy location family, log f = -log(pi) - log(1 + (x - theta)^2).
pub fn cauchy_parametric() -> ParametricModel {
    ParametricModel::new(
        "cauchy",
        1,
        |obs, t| {
            let r = obs[0] - t;
            Ok(-std::f64::consts::PI.ln() - (1.0 + r * r).ln())
        },
        |obs, t| {
            let r = obs[0] - t;
            Ok(2.0 * r / (1.0 + r * r))
        },
        None,
    )
}

/// N(theta, theta^2), with analytic score and Bartlett-identity function.
pub fn curved_normal_parametric() -> ParametricModel {
    fn check(t: f64) -> Result<()> {
        if t.abs() < CURVED_POLE_BAND {
            Err(Error::domain(format!(
                "N(theta, theta^2) degenerates at theta = 0 (got {t})"
            )))
        } else {
            Ok(())
        }
    }
    let phi: Arc<ScalarFn> = Arc::new(|obs: &[f64], t: f64| {
        check(t)?;
        let x = obs[0];
        let s = x * x / (t * t * t) - x / (t * t) - 1.0 / t;
        let sprime = -3.0 * x * x / (t * t * t * t) + 2.0 * x / (t * t * t) + 1.0 / (t * t);
        Ok(s * s + sprime)
    });
    ParametricModel::new(
        "curved-normal",
        1,
        |obs, t| {
            check(t)?;
            let r = obs[0] - t;
            Ok(-(SQRT_2PI.ln()) - t.abs().ln() - r * r / (2.0 * t * t))
        },
        |obs, t| {
            check(t)?;
            let x = obs[0];
            Ok(x * x / (t * t * t) - x / (t * t) - 1.0 / t)
        },
        Some(phi),
    )
    // Location-scale family N(theta, theta^2): I = 1/theta^2 + 2/theta^2.
    .with_fisher_information(|t| {
        check(t)?;
        Ok(3.0 / (t * t))
    })
}

/// Two-component normal mixture with unknown first centre. The score and phi
/// are exact derivatives of logpdf, so the Bartlett identity holds analytically.
pub fn mixture_parametric(params: MixtureParams) -> Result<ParametricModel> {
    params.validate()?;
    let p = params;
    let phi: Arc<ScalarFn> = Arc::new(move |obs: &[f64], t: f64| {
        let x = obs[0];
        let f = p.density(x, t);
        let z = (x - t) / p.sigma1;
        let s1 = p.sigma1;
        // f''/f = s^2 + s' with s = f'/f
        Ok(p.pi * ((x - t) * (x - t) - s1 * s1) * std_normal_pdf(z) / (s1.powi(5) * f))
    });
    Ok(ParametricModel::new(
        "mixture",
        1,
        move |obs, t| Ok(p.density(obs[0], t).ln()),
        move |obs, t| {
            let x = obs[0];
            let f = p.density(x, t);
            Ok(p.pi * (x - t) * std_normal_pdf((x - t) / p.sigma1) / (p.sigma1.powi(3) * f))
        },
        Some(phi),
    ))
}

/// Gaussian-error nonlinear regression y = theta + theta^2 x + eps. The
/// logpdf omits the normalizing constant so that -2 sum logpdf is exactly the
/// least-squares objective S_n(theta).
pub fn nlr_parametric() -> ParametricModel {
    ParametricModel::new(
        "nlr-gaussian",
        2,
        |obs, t| {
            let r = obs[1] - t - t * t * obs[0];
            Ok(-0.5 * r * r)
        },
        |obs, t| {
            let (x, y) = (obs[0], obs[1]);
            Ok((1.0 + 2.0 * t * x) * (y - t - t * t * x))
        },
        None,
    )
}

/// The four parametric baselines used by the experiments.
#[derive(Clone, Debug)]
pub struct ParametricCatalog {
    pub cauchy: ParametricModel,
    pub curved_normal: ParametricModel,
    pub mixture: ParametricModel,
    pub nlr_gaussian: ParametricModel,
}

pub fn parametric_catalog() -> ParametricCatalog {
    ParametricCatalog {
        cauchy: cauchy_parametric(),
        curved_normal: curved_normal_parametric(),
        mixture: mixture_parametric(MIXTURE_DEFAULT).expect("default mixture parameters are valid"),
        nlr_gaussian: nlr_parametric(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval1(model: &EstimatingModel, obs: &[f64], theta: f64) -> Vec<f64> {
        model.eval(obs, &[theta]).unwrap()
    }

    #[test]
    fn mean_model_values() {
        let m = mean_model();
        assert_eq!(eval1(&m, &[3.0], 3.0), vec![0.0]);
        assert_eq!(eval1(&m, &[5.0], 2.0), vec![3.0]);
        let total: f64 = [1.0, 2.0, 3.0]
            .iter()
            .map(|&x| eval1(&m, &[x], 2.0)[0])
            .sum();
        assert_eq!(total, 0.0);
    }

    #[test]
    fn mean_var_values() {
        let m = mean_var_equal_model();
        assert_eq!(eval1(&m, &[0.0], 0.0), vec![0.0, 0.0]);
        assert_eq!(eval1(&m, &[2.0], 1.0), vec![1.0, 2.0]);
        assert_eq!(eval1(&m, &[1.0], 1.0), vec![0.0, -1.0]);
    }

    #[test]
    fn cauchy_score_values() {
        let m = cauchy_score_model();
        assert_eq!(eval1(&m, &[0.0], 0.0), vec![0.0]);
        assert_eq!(eval1(&m, &[1.0], 0.0), vec![0.5]);
        assert!(eval1(&m, &[1e12], 0.0)[0].abs() < 1e-11);
    }

    #[test]
    fn cauchy_remedy_values() {
        let m = cauchy_remedy_model();
        assert_eq!(eval1(&m, &[1.0], 1.0), vec![0.0, 0.0]);
        let g = eval1(&m, &[-7.0], 1.0);
        assert!((g[1] + 2.0).abs() < 1e-12, "signed cube root of -8");
        let g = eval1(&m, &[2.0], 1.0);
        assert!((g[0] - 0.5).abs() < 1e-15 && (g[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nlr_score_values() {
        let m = nlr_score_model();
        // Noiseless y = theta* + theta*^2 x at theta = theta*.
        let (t, x) = (1.3, 0.7);
        let y = t + t * t * x;
        assert!(eval1(&m, &[x, y], t)[0].abs() < 1e-12);
        assert_eq!(eval1(&m, &[0.0, 0.0], 1.0), vec![-1.0]);
        // First factor vanishes at x = -1/(2 theta).
        assert!(eval1(&m, &[-0.5, 123.0], 1.0)[0].abs() < 1e-12);
    }

    #[test]
    fn nlr_remedy_values() {
        let m = nlr_remedy_model();
        let (t, x) = (1.3, 0.7);
        let y = t + t * t * x;
        let g = eval1(&m, &[x, y], t);
        assert!(g[0].abs() < 1e-12 && g[1].abs() < 1e-12);
        assert_eq!(eval1(&m, &[1.0, 2.0], 1.0), vec![0.0, 0.0]);
        assert_eq!(eval1(&m, &[2.0, 0.0], 1.0), vec![-3.0, -6.0]);
    }

    #[test]
    fn curved_score_values() {
        let m = curved_normal_score_model();
        assert_eq!(eval1(&m, &[1.0], 1.0), vec![-1.0]);
        assert_eq!(eval1(&m, &[0.0], 1.0), vec![-1.0]);
        assert!(m.eval(&[1.0], &[0.0]).is_err(), "pole at theta = 0");
        // Two-point Gauss-Hermite stencil for N(1,1): nodes 0 and 2, weight 1/2.
        // Exact for this quadratic-in-x score, and E g(X; 1) = 0.
        let s = 0.5 * (eval1(&m, &[0.0], 1.0)[0] + eval1(&m, &[2.0], 1.0)[0]);
        assert!(s.abs() < 1e-15);
    }

    #[test]
    fn curved_remedy_values() {
        let m = curved_normal_remedy_model();
        assert_eq!(eval1(&m, &[0.0], 0.0), vec![0.0, 0.0]);
        assert_eq!(eval1(&m, &[2.0], 1.0), vec![1.0, 2.0]);
        assert_eq!(eval1(&m, &[-1.0], 1.0), vec![-2.0, -1.0]);
    }

    #[test]
    fn mixture_scores() {
        let models = mixture_models(MIXTURE_DEFAULT).unwrap();
        // Numerator x - theta vanishes.
        assert_eq!(eval1(&models.score, &[0.3], 0.3), vec![0.0]);
        // phi vanishes when (x - theta)^2 = sigma1^2.
        let g = eval1(&models.score_phi, &[1.0], 0.0);
        assert!(g[1].abs() < 1e-15);
        // Direct arithmetic of the printed formula at x = 5, theta = 0.
        let p = MIXTURE_DEFAULT;
        let f = 0.4 * std_normal_pdf(5.0) + 0.6 / 4.0 * std_normal_pdf((5.0 - 10.0) / 4.0);
        let want = 5.0 * std_normal_pdf(5.0) / f;
        let got = eval1(&models.score, &[5.0], 0.0)[0];
        assert!((got - want).abs() < 1e-12);
        // Three-score components at the same point.
        let g3 = eval1(&models.three_score, &[5.0], 0.0);
        assert!((g3[0] - want).abs() < 1e-12);
        let want1 = (5.0 - 10.0) * std_normal_pdf(-1.25) / f;
        let want2 = (4.0 * std_normal_pdf(5.0) - std_normal_pdf(-1.25)) / f;
        assert!((g3[1] - want1).abs() < 1e-12);
        assert!((g3[2] - want2).abs() < 1e-12);
        assert_eq!(models.three_score.m(), 3);
        assert!((p.density(5.0, 0.0) - f).abs() < 1e-15);
    }

    #[test]
    fn mixture_params_validated() {
        assert!(mixture_models(MixtureParams {
            pi: 0.0,
            mu2: 1.0,
            sigma1: 1.0,
            sigma2: 1.0
        })
        .is_err());
        assert!(mixture_models(MixtureParams {
            pi: 0.4,
            mu2: 1.0,
            sigma1: 0.0,
            sigma2: 1.0
        })
        .is_err());
    }

    #[test]
    fn asset_pricing_values() {
        let m = asset_pricing_model();
        let g = eval1(&m, &[0.0, 0.0], 3.0);
        let want = (-0.72f64).exp() - 1.0;
        assert!((g[0] - want).abs() < 1e-15);
        assert_eq!(g[1], 0.0);
        assert!((want + 0.5132).abs() < 1e-4);
    }

    #[test]
    fn stack_matches_remedy() {
        let cube = EstimatingModel::new("cube-root", 1, 1, 1, vec![], |obs, theta, out| {
            out[0] = (obs[0] - theta[0]).cbrt();
            Ok(())
        });
        let stacked = stack(&cauchy_score_model(), &cube).unwrap();
        let remedy = cauchy_remedy_model();
        assert_eq!(stacked.m(), 2);
        let mut u = 0.123_f64;
        let mut v = 0.456_f64;
        for _ in 0..100 {
            u = (u + GOLDEN).fract();
            v = (v + GOLDEN * GOLDEN).fract();
            let x = 40.0 * u - 20.0;
            let t = 10.0 * v - 5.0;
            assert_eq!(
                stacked.eval(&[x], &[t]).unwrap(),
                remedy.eval(&[x], &[t]).unwrap()
            );
        }
    }

    #[test]
    fn stack_is_associative_up_to_order() {
        let a = mean_model();
        let b = cauchy_score_model();
        let c = curved_normal_remedy_model();
        let left = stack(&stack(&a, &b).unwrap(), &c).unwrap();
        let right = stack(&a, &stack(&b, &c).unwrap()).unwrap();
        for k in 0..50 {
            let x = -3.0 + 0.13 * k as f64;
            let t = 0.5 + 0.04 * k as f64;
            assert_eq!(
                left.eval(&[x], &[t]).unwrap(),
                right.eval(&[x], &[t]).unwrap()
            );
        }
    }

    #[test]
    fn stack_rejects_mismatched_shapes() {
        assert!(stack(&mean_model(), &nlr_score_model()).is_err());
    }

    const GOLDEN: f64 = 0.618_033_988_749_894_9;

    #[test]
    fn cauchy_logpdf_at_mode() {
        let m = cauchy_parametric();
        let v = m.logpdf(&[2.0], 2.0).unwrap();
        assert!((v + std::f64::consts::PI.ln()).abs() < 1e-15);
    }

    #[test]
    fn bartlett_phi_matches_finite_differences() {
        // phi = s^2 + ds/dtheta, spot-checked by central differences of the score.
        let models: Vec<ParametricModel> = vec![
            curved_normal_parametric(),
            mixture_parametric(MIXTURE_DEFAULT).unwrap(),
        ];
        for model in &models {
            let mut u = 0.37_f64;
            for _ in 0..20 {
                u = (u * 1.618_033_988_749_895).fract();
                let x = 6.0 * u - 1.0;
                let t = 0.4 + 1.6 * u;
                let h = 1e-5 * (1.0 + t.abs());
                let s = model.score(&[x], t).unwrap();
                let ds = (model.score(&[x], t + h).unwrap() - model.score(&[x], t - h).unwrap())
                    / (2.0 * h);
                let phi = model.bartlett_phi(&[x], t).unwrap();
                assert!(
                    (phi - (s * s + ds)).abs() < 1e-5,
                    "{}: phi {} vs FD {}",
                    model.name(),
                    phi,
                    s * s + ds
                );
            }
        }
    }

    #[test]
    fn bartlett_phi_has_zero_mean_at_truth() {
        // E[phi(X; theta*)] = 0 for a regular, correctly specified family;
        // Monte Carlo check for the two models the studentized test uses.
        use crate::numerics::{sample, summarize, DistributionSpec, RngStream};
        let n = 200_000;

        let curved = curved_normal_parametric();
        let data = sample(
            &DistributionSpec::Normal {
                mean: 1.0,
                variance: 1.0,
            },
            n,
            &mut RngStream::new(606, 0),
        )
        .unwrap();
        let vals: Vec<f64> = data
            .rows()
            .map(|o| curved.bartlett_phi(o, 1.0).unwrap())
            .collect();
        let s = summarize(&vals).unwrap();
        let se = (s.variance / n as f64).sqrt();
        assert!(
            s.mean.abs() <= 4.0 * se,
            "curved: mean {} vs 4se {}",
            s.mean,
            4.0 * se
        );

        let mix = mixture_parametric(MIXTURE_DEFAULT).unwrap();
        let gen = DistributionSpec::NormalMixture {
            weight: 0.4,
            mean1: 0.0,
            var1: 1.0,
            mean2: 10.0,
            var2: 16.0,
        };
        let data = sample(&gen, n, &mut RngStream::new(606, 1)).unwrap();
        let vals: Vec<f64> = data
            .rows()
            .map(|o| mix.bartlett_phi(o, 0.0).unwrap())
            .collect();
        let s = summarize(&vals).unwrap();
        let se = (s.variance / n as f64).sqrt();
        assert!(
            s.mean.abs() <= 4.0 * se,
            "mixture: mean {} vs 4se {}",
            s.mean,
            4.0 * se
        );
    }

    #[test]
    fn curved_fisher_information_matches_score_moment() {
        // I(theta) = E[s^2] under N(theta, theta^2); two-sided check by
        // Gauss-Hermite-style stencil is not exact here (s^2 is quartic), so
        // use a dense quadrature of the normal density.
        let m = curved_normal_parametric();
        for &t in &[0.7_f64, 1.0, 2.5, -1.3] {
            let sd = t.abs();
            let steps = 20_000;
            let (lo, hi) = (t - 10.0 * sd, t + 10.0 * sd);
            let h = (hi - lo) / steps as f64;
            let mut acc = 0.0;
            for k in 0..=steps {
                let x = lo + k as f64 * h;
                let z = (x - t) / sd;
                let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
                let dens = (-0.5 * z * z).exp() / (sd * SQRT_2PI);
                let s = m.score(&[x], t).unwrap();
                acc += w * s * s * dens;
            }
            let quad = acc * h;
            let info = m.fisher_information(t).unwrap().unwrap();
            assert!(
                (info - quad).abs() < 1e-6,
                "I({t}) = {info} vs quadrature {quad}"
            );
        }
    }

    #[test]
    fn score_is_logpdf_derivative() {
        let catalog = parametric_catalog();
        let models = [&catalog.cauchy, &catalog.curved_normal, &catalog.mixture];
        for model in models {
            for k in 0..10 {
                let x = -2.0 + 0.9 * k as f64;
                let t = 0.5 + 0.17 * k as f64;
                let h = 1e-6 * (1.0 + t.abs());
                let fd = (model.logpdf(&[x], t + h).unwrap() - model.logpdf(&[x], t - h).unwrap())
                    / (2.0 * h);
                let s = model.score(&[x], t).unwrap();
                assert!(
                    (s - fd).abs() < 1e-4,
                    "{} x={x} t={t}: {s} vs {fd}",
                    model.name()
                );
            }
        }
        // Paired-observation case.
        let nlr = catalog.nlr_gaussian;
        for k in 0..10 {
            let (x, y, t) = (0.3 * k as f64, 1.0 + 0.2 * k as f64, 0.8 + 0.05 * k as f64);
            let h = 1e-6;
            let fd = (nlr.logpdf(&[x, y], t + h).unwrap() - nlr.logpdf(&[x, y], t - h).unwrap())
                / (2.0 * h);
            assert!((nlr.score(&[x, y], t).unwrap() - fd).abs() < 1e-4);
        }
    }

    #[test]
    fn mixture_logpdf_component_dominance() {
        // With a narrow second component far to the right, a far-left x is
        // dominated by component 1: log f ~ log(pi) + log phi(x - theta).
        let p = MixtureParams {
            pi: 0.4,
            mu2: 10.0,
            sigma1: 1.0,
            sigma2: 1.0,
        };
        let model = mixture_parametric(p).unwrap();
        let x = -10.0;
        let got = model.logpdf(&[x], 0.0).unwrap();
        let want = 0.4_f64.ln() + std_normal_pdf(x).ln();
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }

    #[test]
    fn by_id_roundtrip() {
        for id in MODEL_IDS {
            let m = by_id(id).unwrap();
            assert_eq!(m.name(), id);
        }
        assert!(by_id("nope").is_err());
    }

    #[test]
    fn scaled_component_scales() {
        let m = curved_normal_remedy_model().scale_component(1, 2.0);
        assert_eq!(m.eval(&[2.0], &[1.0]).unwrap(), vec![1.0, 4.0]);
    }
}
