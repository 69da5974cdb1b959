//! The Monte Carlo scenario runner.
//!
//! Replication r draws its data with stream `(seed, r)`; auxiliary draws
//! (the extreme-value test) use stream ids offset by 2^32 so the two never
//! collide. Replications run in parallel and are aggregated in replication
//! order, so a scenario's report is identical under any scheduler.

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::el::InnerSolveConfig;
use crate::error::{Error, Result};
use crate::experiments::{RawRecord, Report, ReportRow};
use crate::gmtests::{dehaan_test, global_maximum_test, jiang_test, ElVariant};
use crate::models::{self, EstimatingModel, MixtureParams, ParametricModel};
use crate::numerics::{sample, DistributionSpec, RngStream};
use crate::optimize::{
    mele, mle, scan_profile, CandidateKind, CandidatePoint, FitResult, MleObjectiveKind, Objective,
    SearchSpec,
};

/// Data-generating process for one scenario.
#[derive(Clone, Debug)]
pub enum DataGenerator {
    Iid(DistributionSpec),
    /// Paired regression observations (x, y) with y = t* + t*^2 x + eps.
    NlrPairs {
        covariate: DistributionSpec,
        noise: DistributionSpec,
        theta_star: f64,
    },
}

impl DataGenerator {
    fn validate(&self) -> Result<()> {
        match self {
            DataGenerator::Iid(d) => d.validate(),
            DataGenerator::NlrPairs {
                covariate, noise, ..
            } => {
                covariate.validate()?;
                noise.validate()?;
                if covariate.dim() != 1 || noise.dim() != 1 {
                    return Err(Error::domain(
                        "regression covariate and noise must be scalar",
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn sample(&self, n: usize, rng: &mut RngStream) -> Result<Dataset> {
        match self {
            DataGenerator::Iid(d) => sample(d, n, rng),
            DataGenerator::NlrPairs {
                covariate,
                noise,
                theta_star,
            } => {
                let joint = DistributionSpec::Product(vec![covariate.clone(), noise.clone()]);
                let draws = sample(&joint, n, rng)?;
                let t = *theta_star;
                let rows: Vec<Vec<f64>> = draws
                    .rows()
                    .map(|r| {
                        let (x, e) = (r[0], r[1]);
                        vec![x, t + t * t * x + e]
                    })
                    .collect();
                Dataset::from_rows(&rows)
            }
        }
    }
}

/// Parametric baseline fitted alongside the EL model.
#[derive(Clone, Debug)]
pub enum ParametricId {
    Cauchy,
    CurvedNormal,
    Mixture(MixtureParams),
    /// Least squares for the nonlinear regression.
    NlrLeastSquares,
}

impl ParametricId {
    fn build(&self) -> Result<(ParametricModel, MleObjectiveKind)> {
        Ok(match self {
            ParametricId::Cauchy => (models::cauchy_parametric(), MleObjectiveKind::Nll),
            ParametricId::CurvedNormal => {
                (models::curved_normal_parametric(), MleObjectiveKind::Nll)
            }
            ParametricId::Mixture(p) => (models::mixture_parametric(*p)?, MleObjectiveKind::Nll),
            ParametricId::NlrLeastSquares => {
                (models::nlr_parametric(), MleObjectiveKind::LeastSquares)
            }
        })
    }
}

/// How the tested non-global candidate is chosen among a fit's local minima.
#[derive(Clone, Copy, Debug)]
pub enum LocalRule {
    /// The local candidate closest to a reference parameter value.
    NearestTo(f64),
    /// The non-global candidate with the best (smallest) objective value.
    BestNonGlobal,
}

fn pick_local(fit: &FitResult, rule: LocalRule) -> Option<CandidatePoint> {
    let locals = fit
        .candidates
        .iter()
        .filter(|c| c.kind == CandidateKind::LocalMin);
    match rule {
        LocalRule::NearestTo(target) => locals.min_by(|a, b| {
            let da = (a.theta - target).abs();
            let db = (b.theta - target).abs();
            da.partial_cmp(&db)
                .unwrap()
                .then(a.theta.partial_cmp(&b.theta).unwrap())
        }),
        LocalRule::BestNonGlobal => locals.min_by(|a, b| {
            a.value
                .partial_cmp(&b.value)
                .unwrap()
                .then(a.theta.abs().partial_cmp(&b.theta.abs()).unwrap())
                .then(a.theta.partial_cmp(&b.theta).unwrap())
        }),
    }
    .copied()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestChoice {
    ElGlobal,
    DeHaan { draws: usize },
    Jiang,
}

/// What a scenario records per sample size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Measure {
    /// Fraction of replications whose estimating equation has a root outside [lo, hi].
    RootCensusOutside { lo: f64, hi: f64 },
    /// Means and variances of the MELE and/or MLE across replications.
    EstimateMoments,
    /// Rejection rates of the requested tests at the global and local candidates.
    TestRates,
    /// Histogram of the MELE across replications.
    MeleHistogram { bins: usize },
    /// Profile objective trace (theta, W) from the first replication.
    ProfileTrace,
}

/// A declarative Monte Carlo experiment.
#[derive(Clone, Debug)]
pub struct ScenarioSpec {
    pub name: String,
    pub generator: DataGenerator,
    /// Catalog id of the EL model, when the scenario fits one.
    pub el_model: Option<String>,
    pub parametric: Option<ParametricId>,
    pub sample_sizes: Vec<usize>,
    pub replications: u64,
    pub alpha: f64,
    pub seed: u64,
    pub search: SearchSpec,
    pub tests: Vec<TestChoice>,
    pub use_ael: bool,
    pub local_rule: LocalRule,
    pub measures: Vec<Measure>,
    pub keep_raw: bool,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::domain("replications must be >= 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::domain(format!(
                "alpha must be in (0,1) (got {})",
                self.alpha
            )));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::domain("at least one sample size is required"));
        }
        self.generator.validate()?;
        if let Some(id) = &self.el_model {
            models::by_id(id)?;
        }
        if let Some(p) = &self.parametric {
            p.build()?;
        }
        for t in &self.tests {
            match t {
                TestChoice::ElGlobal => {
                    if self.el_model.is_none() {
                        return Err(Error::domain("el_global test needs an EL model"));
                    }
                }
                TestChoice::DeHaan { draws } => {
                    if self.parametric.is_none() {
                        return Err(Error::domain("De Haan test needs a parametric objective"));
                    }
                    if *draws < 2 {
                        return Err(Error::domain("De Haan test needs at least two draws"));
                    }
                }
                TestChoice::Jiang => {
                    let Some(p) = &self.parametric else {
                        return Err(Error::domain("Jiang test needs a parametric model"));
                    };
                    if !p.build()?.0.has_bartlett_phi() {
                        return Err(Error::domain(
                            "Jiang test needs a model with a Bartlett-identity function",
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn test_labels(tests: &[TestChoice]) -> Vec<String> {
    let mut labels = Vec::new();
    for t in tests {
        let prefix = match t {
            TestChoice::ElGlobal => "el_global".to_string(),
            TestChoice::DeHaan { draws } => format!("dehaan{draws}"),
            TestChoice::Jiang => "jiang".to_string(),
        };
        labels.push(format!("{prefix}_reject_at_global"));
        labels.push(format!("{prefix}_reject_at_local"));
    }
    labels
}

struct RepRecord {
    mele: Option<f64>,
    w2_at_mele: Option<f64>,
    mle: Option<f64>,
    mele_no_fit: bool,
    mle_no_fit: bool,
    root_outside: Option<bool>,
    /// One entry per test label; `None` marks an unavailable candidate (n/a).
    rejects: Vec<Option<bool>>,
    trace: Option<Vec<(f64, f64)>>,
}

/// Stream-id offset keeping auxiliary draws disjoint from data draws.
const AUX_STREAM_BASE: u64 = 1 << 32;

fn run_one(
    spec: &ScenarioSpec,
    el_model: Option<&EstimatingModel>,
    parametric: Option<&(ParametricModel, MleObjectiveKind)>,
    n: usize,
    rep: u64,
) -> Result<RepRecord> {
    let cfg = InnerSolveConfig::default();
    let mut data_rng = RngStream::new(spec.seed, rep);
    let data = spec.generator.sample(n, &mut data_rng)?;

    let wants_moments = spec
        .measures
        .iter()
        .any(|m| matches!(m, Measure::EstimateMoments));
    let wants_hist = spec
        .measures
        .iter()
        .any(|m| matches!(m, Measure::MeleHistogram { .. }));
    let has_el_test = spec.tests.contains(&TestChoice::ElGlobal);
    let has_par_test = spec
        .tests
        .iter()
        .any(|t| matches!(t, TestChoice::DeHaan { .. } | TestChoice::Jiang));

    let mut rec = RepRecord {
        mele: None,
        w2_at_mele: None,
        mle: None,
        mele_no_fit: false,
        mle_no_fit: false,
        root_outside: None,
        rejects: vec![None; 2 * spec.tests.len()],
        trace: None,
    };

    // Root census. Redescending scores admit roots near extreme observations
    // far outside any fixed box, so the census brackets adaptively around the
    // data instead of scanning spec.search alone.
    if let Some(Measure::RootCensusOutside { lo, hi }) = spec
        .measures
        .iter()
        .find(|m| matches!(m, Measure::RootCensusOutside { .. }))
    {
        let model = el_model.expect("root census requires an EL model");
        let roots = crate::optimize::adaptive_root_census(&data, model, spec.search.refine_tol)?;
        rec.root_outside = Some(roots.iter().any(|r| *r < *lo || *r > *hi));
    }

    // EL fit.
    let mut el_fit = None;
    if let Some(model) = el_model {
        if wants_moments || wants_hist || has_el_test {
            match mele(&data, model, &spec.search, spec.use_ael, &cfg) {
                Ok(fit) => el_fit = Some(fit),
                Err(Error::NoFit) => rec.mele_no_fit = true,
                Err(e) => return Err(e),
            }
        }
    }
    if let Some(fit) = &el_fit {
        rec.mele = Some(fit.selected.theta);
        rec.w2_at_mele = Some(2.0 * fit.selected.value);
    }

    // Parametric fit.
    let mut par_fit = None;
    if let Some((pm, kind)) = parametric {
        if wants_moments || has_par_test {
            match mle(&data, pm, &spec.search, *kind) {
                Ok(fit) => par_fit = Some(fit),
                Err(Error::NoFit) => rec.mle_no_fit = true,
                Err(e) => return Err(e),
            }
        }
    }
    if let Some(fit) = &par_fit {
        rec.mle = Some(fit.selected.theta);
    }

    // Tests at the global and at the designated local candidate.
    let variant = if spec.use_ael {
        ElVariant::Ael
    } else {
        ElVariant::PlainWithAelFallback
    };
    for (slot, test) in spec.tests.iter().enumerate() {
        let (g_idx, l_idx) = (2 * slot, 2 * slot + 1);
        match test {
            TestChoice::ElGlobal => {
                let Some(fit) = &el_fit else { continue };
                let model = el_model.unwrap();
                let g = global_maximum_test(
                    &data,
                    model,
                    &[fit.selected.theta],
                    spec.alpha,
                    &cfg,
                    variant,
                )?;
                rec.rejects[g_idx] = Some(g.reject);
                if let Some(local) = pick_local(fit, spec.local_rule) {
                    let l = global_maximum_test(
                        &data,
                        model,
                        &[local.theta],
                        spec.alpha,
                        &cfg,
                        variant,
                    )?;
                    rec.rejects[l_idx] = Some(l.reject);
                }
            }
            TestChoice::Jiang => {
                let Some(fit) = &par_fit else { continue };
                let (pm, _) = parametric.unwrap();
                match jiang_test(&data, pm, fit.selected.theta, spec.alpha) {
                    Ok(out) => rec.rejects[g_idx] = Some(out.reject),
                    Err(Error::Inconclusive(_)) => {}
                    Err(e) => return Err(e),
                }
                if let Some(local) = pick_local(fit, spec.local_rule) {
                    match jiang_test(&data, pm, local.theta, spec.alpha) {
                        Ok(out) => rec.rejects[l_idx] = Some(out.reject),
                        Err(Error::Inconclusive(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
            TestChoice::DeHaan { draws } => {
                let Some(fit) = &par_fit else { continue };
                let (pm, kind) = parametric.unwrap();
                let objective = match kind {
                    MleObjectiveKind::Nll => Objective::ParametricNll { model: pm },
                    MleObjectiveKind::LeastSquares => Objective::LeastSquares { model: pm },
                };
                // The extreme-value bound applies to the maximized objective.
                let maximized = |theta: f64| -objective.value(&data, theta);
                let (lo, hi) = spec.search.bounds[0];
                let mut rng = RngStream::new(spec.seed, AUX_STREAM_BASE + rep * 8 + slot as u64);
                let g = dehaan_test(
                    maximized,
                    -fit.selected.value,
                    (lo, hi),
                    *draws,
                    spec.alpha,
                    &mut rng,
                )?;
                rec.rejects[g_idx] = Some(g.reject);
                if let Some(local) = pick_local(fit, spec.local_rule) {
                    let mut rng =
                        RngStream::new(spec.seed, AUX_STREAM_BASE + rep * 8 + slot as u64);
                    let l = dehaan_test(
                        maximized,
                        -local.value,
                        (lo, hi),
                        *draws,
                        spec.alpha,
                        &mut rng,
                    )?;
                    rec.rejects[l_idx] = Some(l.reject);
                }
            }
        }
    }

    // Profile trace from the first replication only.
    if rep == 0
        && spec
            .measures
            .iter()
            .any(|m| matches!(m, Measure::ProfileTrace))
    {
        let model = el_model.ok_or_else(|| Error::domain("profile trace requires an EL model"))?;
        let objective = if spec.use_ael {
            Objective::AelPelr { model, cfg }
        } else {
            Objective::Pelr { model, cfg }
        };
        rec.trace = Some(scan_profile(&data, &objective, &spec.search)?);
    }

    Ok(rec)
}

fn binomial_se(rate: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (rate * (1.0 - rate) / n as f64).sqrt()
}

fn moment_rows(label: &str, values: &[f64], no_fit: usize, n: usize, rows: &mut Vec<ReportRow>) {
    if !values.is_empty() {
        let s = crate::numerics::summarize(values).expect("nonempty");
        let count = s.count as f64;
        rows.push(ReportRow {
            label: format!("{label}_mean"),
            n,
            kind: "mean".into(),
            value: s.mean,
            mc_se: (s.variance / count).sqrt(),
        });
        rows.push(ReportRow {
            label: format!("{label}_var"),
            n,
            kind: "variance".into(),
            value: s.variance,
            // Normal-approximation standard error of a sample variance.
            mc_se: if s.count >= 2 {
                s.variance * (2.0 / (count - 1.0)).sqrt()
            } else {
                0.0
            },
        });
    }
    rows.push(ReportRow {
        label: format!("{label}_no_fit"),
        n,
        kind: "count".into(),
        value: no_fit as f64,
        mc_se: 0.0,
    });
}

/// Run a scenario: per replication, draw data, fit, test, and aggregate
/// means, variances, and rejection rates. Replication-level no-fits are
/// counted and reported, never dropped silently.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<Report> {
    spec.validate()?;
    let el_model = spec.el_model.as_deref().map(models::by_id).transpose()?;
    let parametric = spec.parametric.as_ref().map(|p| p.build()).transpose()?;

    let labels = test_labels(&spec.tests);
    let mut rows: Vec<ReportRow> = Vec::new();
    let mut raw: Vec<RawRecord> = Vec::new();

    for &n in &spec.sample_sizes {
        let recs: Vec<Result<RepRecord>> = (0..spec.replications)
            .into_par_iter()
            .map(|rep| run_one(spec, el_model.as_ref(), parametric.as_ref(), n, rep))
            .collect();
        let mut ordered = Vec::with_capacity(recs.len());
        for r in recs {
            ordered.push(r?);
        }

        for measure in &spec.measures {
            match measure {
                Measure::RootCensusOutside { .. } => {
                    let outside = ordered
                        .iter()
                        .filter(|r| r.root_outside == Some(true))
                        .count();
                    let total = ordered.iter().filter(|r| r.root_outside.is_some()).count();
                    let rate = outside as f64 / total.max(1) as f64;
                    rows.push(ReportRow {
                        label: "root_outside_rate".into(),
                        n,
                        kind: "rate".into(),
                        value: rate,
                        mc_se: binomial_se(rate, total),
                    });
                }
                Measure::EstimateMoments => {
                    if spec.el_model.is_some() {
                        let vals: Vec<f64> = ordered.iter().filter_map(|r| r.mele).collect();
                        let no_fit = ordered.iter().filter(|r| r.mele_no_fit).count();
                        moment_rows("mele", &vals, no_fit, n, &mut rows);
                    }
                    if spec.parametric.is_some() {
                        let vals: Vec<f64> = ordered.iter().filter_map(|r| r.mle).collect();
                        let no_fit = ordered.iter().filter(|r| r.mle_no_fit).count();
                        moment_rows("mle", &vals, no_fit, n, &mut rows);
                    }
                }
                Measure::TestRates => {
                    for (idx, label) in labels.iter().enumerate() {
                        let defined: Vec<bool> =
                            ordered.iter().filter_map(|r| r.rejects[idx]).collect();
                        let na = ordered.len() - defined.len();
                        if !defined.is_empty() {
                            let rate = defined.iter().filter(|&&b| b).count() as f64
                                / defined.len() as f64;
                            rows.push(ReportRow {
                                label: label.clone(),
                                n,
                                kind: "rate".into(),
                                value: rate,
                                mc_se: binomial_se(rate, defined.len()),
                            });
                        }
                        rows.push(ReportRow {
                            label: format!("{label}_na"),
                            n,
                            kind: "count".into(),
                            value: na as f64,
                            mc_se: 0.0,
                        });
                    }
                }
                Measure::MeleHistogram { bins } => {
                    let vals: Vec<f64> = ordered.iter().filter_map(|r| r.mele).collect();
                    if !vals.is_empty() {
                        let spec_bins = crate::experiments::BinSpec::covering(&vals, *bins)?;
                        for (left, right, count) in
                            crate::experiments::emit_histogram(&vals, &spec_bins)?
                        {
                            rows.push(ReportRow {
                                label: format!("hist[{left};{right})"),
                                n,
                                kind: "count".into(),
                                value: count as f64,
                                mc_se: 0.0,
                            });
                        }
                    }
                }
                Measure::ProfileTrace => {
                    if let Some(trace) = ordered.first().and_then(|r| r.trace.as_ref()) {
                        for (theta, w) in trace {
                            rows.push(ReportRow {
                                label: format!("theta={theta}"),
                                n,
                                kind: "w_n".into(),
                                value: *w,
                                mc_se: 0.0,
                            });
                        }
                    }
                }
            }
        }

        if spec.keep_raw {
            for (rep, rec) in ordered.iter().enumerate() {
                let mut push = |field: &str, value: Option<f64>| {
                    if let Some(v) = value {
                        raw.push(RawRecord {
                            n,
                            replication: rep as u64,
                            field: field.into(),
                            value: v,
                        });
                    }
                };
                push("mele", rec.mele);
                push("w2_at_mele", rec.w2_at_mele);
                push("mle", rec.mle);
            }
        }
    }

    Ok(Report {
        scenario: spec.name.clone(),
        rows,
        raw: if spec.keep_raw { Some(raw) } else { None },
    })
}

pub const BUILTIN_IDS: [&str; 10] = [
    "table1", "table2", "fig1", "table3", "table4", "table5", "table6", "table7", "table8", "fig2",
];

const DEFAULT_SEED: u64 = 42;

/// The builtin scenarios at their standard sizes.
pub fn builtin(id: &str) -> Result<ScenarioSpec> {
    let cauchy = DataGenerator::Iid(DistributionSpec::standard_cauchy());
    let nlr = DataGenerator::NlrPairs {
        covariate: DistributionSpec::Normal {
            mean: 5.0,
            variance: 4.0,
        },
        noise: DistributionSpec::Normal {
            mean: 0.0,
            variance: 1.0,
        },
        theta_star: 1.0,
    };
    let curved = DataGenerator::Iid(DistributionSpec::Normal {
        mean: 1.0,
        variance: 1.0,
    });
    let mixture = DataGenerator::Iid(DistributionSpec::NormalMixture {
        weight: 0.4,
        mean1: 0.0,
        var1: 1.0,
        mean2: 10.0,
        var2: 16.0,
    });

    let base = ScenarioSpec {
        name: id.to_string(),
        generator: cauchy.clone(),
        el_model: None,
        parametric: None,
        sample_sizes: vec![50, 100, 200],
        replications: 1000,
        alpha: 0.05,
        seed: DEFAULT_SEED,
        search: SearchSpec::scalar(-10.0, 10.0),
        tests: vec![],
        use_ael: false,
        local_rule: LocalRule::BestNonGlobal,
        measures: vec![],
        keep_raw: false,
    };

    let spec = match id {
        "table1" => ScenarioSpec {
            el_model: Some("cauchy-score".into()),
            measures: vec![Measure::RootCensusOutside { lo: -1.0, hi: 1.0 }],
            ..base
        },
        "table2" => ScenarioSpec {
            el_model: Some("cauchy-remedy".into()),
            parametric: Some(ParametricId::Cauchy),
            measures: vec![Measure::EstimateMoments],
            ..base
        },
        "fig1" => ScenarioSpec {
            el_model: Some("cauchy-remedy".into()),
            parametric: Some(ParametricId::Cauchy),
            sample_sizes: vec![200],
            measures: vec![
                Measure::MeleHistogram { bins: 30 },
                Measure::EstimateMoments,
            ],
            ..base
        },
        "table3" => ScenarioSpec {
            generator: nlr,
            el_model: Some("nlr-remedy".into()),
            parametric: Some(ParametricId::NlrLeastSquares),
            sample_sizes: vec![30, 50, 100],
            search: SearchSpec::scalar(-5.0, 5.0),
            measures: vec![Measure::EstimateMoments],
            ..base
        },
        "table4" => ScenarioSpec {
            generator: nlr,
            el_model: Some("nlr-remedy".into()),
            parametric: Some(ParametricId::NlrLeastSquares),
            sample_sizes: vec![30, 50, 100],
            search: SearchSpec::scalar(-5.0, 5.0),
            tests: vec![
                TestChoice::ElGlobal,
                TestChoice::DeHaan { draws: 50 },
                TestChoice::DeHaan { draws: 100 },
            ],
            local_rule: LocalRule::NearestTo(-1.0),
            measures: vec![Measure::TestRates],
            ..base
        },
        "table5" => ScenarioSpec {
            generator: curved,
            el_model: Some("curved-remedy".into()),
            parametric: Some(ParametricId::CurvedNormal),
            sample_sizes: vec![30, 50, 100],
            search: SearchSpec::scalar(-5.0, 5.0),
            measures: vec![Measure::EstimateMoments],
            ..base
        },
        "table6" => ScenarioSpec {
            generator: curved,
            el_model: Some("curved-remedy".into()),
            parametric: Some(ParametricId::CurvedNormal),
            sample_sizes: vec![30, 50, 100],
            search: SearchSpec::scalar(-5.0, 5.0),
            tests: vec![TestChoice::ElGlobal, TestChoice::Jiang],
            measures: vec![Measure::TestRates],
            ..base
        },
        "table7" => ScenarioSpec {
            generator: mixture,
            el_model: Some("mixture-three-score".into()),
            parametric: Some(ParametricId::Mixture(models::MIXTURE_DEFAULT)),
            sample_sizes: vec![100, 200, 500],
            search: SearchSpec::scalar(-2.0, 20.0),
            tests: vec![TestChoice::ElGlobal, TestChoice::Jiang],
            use_ael: true,
            measures: vec![Measure::TestRates],
            ..base
        },
        "table8" => ScenarioSpec {
            generator: mixture,
            el_model: Some("mixture-three-score".into()),
            parametric: Some(ParametricId::Mixture(models::MIXTURE_DEFAULT)),
            sample_sizes: vec![100, 200, 500],
            search: SearchSpec::scalar(-2.0, 20.0),
            use_ael: true,
            measures: vec![Measure::EstimateMoments],
            ..base
        },
        "fig2" => ScenarioSpec {
            generator: mixture,
            el_model: Some("mixture-three-score".into()),
            sample_sizes: vec![100],
            replications: 1,
            search: SearchSpec::scalar(-2.0, 20.0),
            use_ael: true,
            measures: vec![Measure::ProfileTrace],
            ..base
        },
        other => return Err(Error::domain(format!("unknown scenario id '{other}'"))),
    };
    Ok(spec)
}
