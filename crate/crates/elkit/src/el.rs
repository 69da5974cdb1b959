//! Profile empirical likelihood at a fixed parameter value.
//!
//! For an n x m matrix of estimating-function values g_i = g(x_i; theta), the
//! profile EL ratio is
//!
//!   W_n(theta) = sum_i log(1 + lambda' g_i),
//!
//! where lambda solves the Lagrange equation sum_i g_i / (1 + lambda' g_i) = 0.
//! Equivalently W_n is the maximum of the concave dual
//! Omega(lambda) = sum_i log(1 + lambda' g_i) over the open domain where every
//! 1 + lambda' g_i stays positive. When the convex hull of the rows does not
//! contain the zero vector, no multiplier exists and W_n(theta) = +inf.
//!
//! The adjusted variant appends the pseudo observation g_{n+1} = -mean(g),
//! which places 0 inside the augmented hull, so it never fails.

use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::models::EstimatingModel;

/// Estimating-function values at a fixed theta, one row per observation.
#[derive(Clone, Debug)]
pub struct GMatrix {
    n: usize,
    m: usize,
    vals: Vec<f64>, // row-major
}

impl GMatrix {
    pub fn from_flat(n: usize, m: usize, vals: Vec<f64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::domain("GMatrix requires n >= 1 and m >= 1"));
        }
        if vals.len() != n * m {
            return Err(Error::domain("GMatrix shape mismatch"));
        }
        if !vals.iter().all(|v| v.is_finite()) {
            return Err(Error::domain("GMatrix entries must be finite"));
        }
        Ok(GMatrix { n, m, vals })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut vals = Vec::with_capacity(rows.len() * m);
        for r in rows {
            if r.len() != m {
                return Err(Error::domain("GMatrix rows must share one length"));
            }
            vals.extend_from_slice(r);
        }
        GMatrix::from_flat(rows.len(), m, vals)
    }

    /// Evaluate `model` at every observation for a fixed theta.
    pub fn from_model(data: &Dataset, model: &EstimatingModel, theta: &[f64]) -> Result<Self> {
        if data.obs_dim() != model.obs_dim() {
            return Err(Error::domain(format!(
                "model {} expects obs_dim {}, data has {}",
                model.name(),
                model.obs_dim(),
                data.obs_dim()
            )));
        }
        let (n, m) = (data.n(), model.m());
        let mut vals = vec![0.0; n * m];
        for (i, obs) in data.rows().enumerate() {
            model.eval_into(obs, theta, &mut vals[i * m..(i + 1) * m])?;
        }
        GMatrix::from_flat(n, m, vals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.vals[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.vals.chunks_exact(self.m)
    }

    pub fn col_means(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.m];
        for row in self.vals.chunks_exact(self.m) {
            for (s, v) in mean.iter_mut().zip(row) {
                *s += v;
            }
        }
        for s in &mut mean {
            *s /= self.n as f64;
        }
        mean
    }

    /// Copy with the pseudo row -mean(g) appended.
    pub fn adjoin_pseudo_row(&self) -> Result<GMatrix> {
        let mean = self.col_means();
        if !mean.iter().all(|v| v.is_finite()) {
            return Err(Error::domain("row mean is not finite"));
        }
        let mut vals = self.vals.clone();
        vals.extend(mean.iter().map(|v| -v));
        GMatrix::from_flat(self.n + 1, self.m, vals)
    }
}

/// Controls for the inner dual maximization.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InnerSolveConfig {
    pub max_iter: usize,
    /// Convergence threshold on the Lagrange gradient, scaled by n:
    /// converged when ||sum_i g_i/(1 + lambda' g_i)|| <= grad_tol * n.
    pub grad_tol: f64,
    /// Lower bound kept on every 1 + lambda' g_i during iteration;
    /// `None` means 1/n (Owen's convention).
    pub feasibility_floor: Option<f64>,
    /// ||lambda|| beyond which a non-vanishing gradient is declared a hull failure.
    pub lambda_cap: f64,
}

impl Default for InnerSolveConfig {
    fn default() -> Self {
        InnerSolveConfig {
            max_iter: 100,
            grad_tol: 1e-10,
            feasibility_floor: None,
            lambda_cap: 1e8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Converged,
    HullFailure,
    IterationCap,
}

/// Result of one inner solve. On `Converged` the weights are strictly
/// positive, sum to one, and satisfy sum_i w_i g_i = 0 to the gradient
/// tolerance; `w_value` is the PELR value (`+inf` on hull failure).
#[derive(Clone, Debug, Serialize)]
pub struct InnerSolution {
    pub status: SolveStatus,
    pub lambda: Vec<f64>,
    pub weights: Vec<f64>,
    pub w_value: f64,
}

/// Profile EL evaluation at one theta: the PELR `w_n` and the profile
/// log-EL `el_n = -w_n - n log n` (rows of the evaluated matrix).
#[derive(Clone, Debug, Serialize)]
pub struct ELEvaluation {
    pub w_n: f64,
    pub el_n: f64,
    pub inner: InnerSolution,
}

impl ELEvaluation {
    fn from_inner(inner: InnerSolution, rows: usize) -> Self {
        let w_n = inner.w_value;
        let el_n = if w_n.is_finite() {
            -w_n - (rows as f64) * (rows as f64).ln()
        } else {
            f64::NEG_INFINITY
        };
        ELEvaluation { w_n, el_n, inner }
    }
}

/// Solve the m x m symmetric positive (semi-)definite system H d = b by
/// Gaussian elimination with partial pivoting, adding a small ridge when the
/// pivot degenerates. Returns false only if the system stays singular.
fn solve_spd(h: &[f64], b: &[f64], m: usize, out: &mut [f64]) -> bool {
    let mut a = h.to_vec();
    let mut rhs = b.to_vec();
    let scale = h
        .iter()
        .step_by(m + 1)
        .fold(0.0_f64, |acc, &d| acc.max(d.abs()));
    for ridge_pow in 0..6 {
        if ridge_pow > 0 {
            a.copy_from_slice(h);
            rhs.copy_from_slice(b);
            let ridge = scale.max(1e-300) * 1e-12 * 10f64.powi(ridge_pow);
            for j in 0..m {
                a[j * m + j] += ridge;
            }
        }
        if gauss_solve(&mut a, &mut rhs, m) {
            out.copy_from_slice(&rhs);
            return true;
        }
    }
    false
}

fn gauss_solve(a: &mut [f64], b: &mut [f64], m: usize) -> bool {
    for col in 0..m {
        let mut piv = col;
        for r in col + 1..m {
            if a[r * m + col].abs() > a[piv * m + col].abs() {
                piv = r;
            }
        }
        if a[piv * m + col].abs() < 1e-300 {
            return false;
        }
        if piv != col {
            for c in 0..m {
                a.swap(col * m + c, piv * m + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * m + col];
        for r in col + 1..m {
            let f = a[r * m + col] / d;
            if f == 0.0 {
                continue;
            }
            for c in col..m {
                a[r * m + c] -= f * a[col * m + c];
            }
            b[r] -= f * b[col];
        }
    }
    for col in (0..m).rev() {
        let mut s = b[col];
        for c in col + 1..m {
            s -= a[col * m + c] * b[c];
        }
        b[col] = s / a[col * m + col];
    }
    true
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Maximize the concave dual by damped Newton with a backtracking line search
/// that keeps every 1 + lambda' g_i at or above the feasibility floor.
pub fn lagrange_solve(g: &GMatrix, cfg: &InnerSolveConfig) -> Result<InnerSolution> {
    lagrange_solve_traced(g, cfg, None)
}

/// As [`lagrange_solve`], optionally recording the dual value at each accepted
/// iterate (the sequence is nondecreasing by construction of the line search).
pub fn lagrange_solve_traced(
    g: &GMatrix,
    cfg: &InnerSolveConfig,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<InnerSolution> {
    let (n, m) = (g.n, g.m);
    let floor = match cfg.feasibility_floor {
        Some(f) => {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::domain(format!(
                    "feasibility floor must be in (0,1) (got {f})"
                )));
            }
            f
        }
        None => 1.0 / n as f64,
    };
    let grad_tol = cfg.grad_tol * n as f64;

    let nonzero_rows: Vec<usize> = (0..n)
        .filter(|&i| g.row(i).iter().any(|&v| v != 0.0))
        .collect();

    // Rows that are exactly zero keep weight 1/n and drop out of the Lagrange
    // equation; with no nonzero rows the solution is lambda = 0.
    if nonzero_rows.is_empty() {
        return Ok(InnerSolution {
            status: SolveStatus::Converged,
            lambda: vec![0.0; m],
            weights: vec![1.0 / n as f64; n],
            w_value: 0.0,
        });
    }

    // Exact hull test in one dimension: the nonzero values must straddle 0.
    if m == 1 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in &nonzero_rows {
            let v = g.row(i)[0];
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !(lo < 0.0 && hi > 0.0) {
            return Ok(hull_failure(m));
        }
    }

    let mut lambda = vec![0.0; m];
    let mut t: Vec<f64> = vec![1.0; n];
    let mut omega = 0.0_f64;
    let mut grad = vec![0.0; m];
    let mut hess = vec![0.0; m * m];
    let mut dir = vec![0.0; m];
    let mut cand_lambda = vec![0.0; m];
    let mut cand_t = vec![0.0; n];
    if let Some(tr) = trace.as_deref_mut() {
        tr.push(omega);
    }

    for _ in 0..cfg.max_iter {
        grad.iter_mut().for_each(|v| *v = 0.0);
        hess.iter_mut().for_each(|v| *v = 0.0);
        for (row, &ti) in g.rows().zip(&t) {
            let inv = 1.0 / ti;
            let inv2 = inv * inv;
            for j in 0..m {
                grad[j] += row[j] * inv;
                for k in j..m {
                    hess[j * m + k] += row[j] * row[k] * inv2;
                }
            }
        }
        for j in 0..m {
            for k in 0..j {
                hess[j * m + k] = hess[k * m + j];
            }
        }

        if norm2(&grad) <= grad_tol {
            let weights: Vec<f64> = t.iter().map(|&ti| 1.0 / (n as f64 * ti)).collect();
            return Ok(InnerSolution {
                status: SolveStatus::Converged,
                lambda,
                weights,
                w_value: omega.max(0.0),
            });
        }

        if !solve_spd(&hess, &grad, m, &mut dir) {
            dir.copy_from_slice(&grad);
        }
        let mut slope: f64 = grad.iter().zip(&dir).map(|(a, b)| a * b).sum();
        if slope <= 0.0 {
            // Curvature got lost numerically; fall back to plain ascent.
            dir.copy_from_slice(&grad);
            slope = grad.iter().map(|v| v * v).sum();
        }

        // Fraction-to-boundary rule: start just short of the largest step
        // that keeps every 1 + lambda' g_i at the floor, so the search never
        // crawls toward the constraint by halving alone.
        let mut step_bound = f64::INFINITY;
        for (row, &ti) in g.rows().zip(&t) {
            let mut dt = 0.0;
            for j in 0..m {
                dt += dir[j] * row[j];
            }
            if dt < 0.0 {
                step_bound = step_bound.min((ti - floor) / (-dt));
            }
        }
        let mut step = if step_bound.is_finite() {
            (0.999 * step_bound).min(1.0)
        } else {
            1.0
        };
        let mut accepted = false;
        // Once the predicted gain drops below the float resolution of the
        // dual value, the sufficient-increase test is meaningless; the
        // feasible Newton step is a contraction there and is taken as is.
        let armijo_negligible = 1e-4 * slope <= f64::EPSILON * (1.0 + omega.abs());
        while step >= 1e-15 {
            for j in 0..m {
                cand_lambda[j] = lambda[j] + step * dir[j];
            }
            let mut feasible = true;
            let mut cand_omega = 0.0;
            for (row, ct) in g.rows().zip(cand_t.iter_mut()) {
                let mut ti = 1.0;
                for j in 0..m {
                    ti += cand_lambda[j] * row[j];
                }
                if ti < floor {
                    feasible = false;
                    break;
                }
                *ct = ti;
                cand_omega += ti.ln();
            }
            if feasible && (armijo_negligible || cand_omega >= omega + 1e-4 * step * slope) {
                lambda.copy_from_slice(&cand_lambda);
                t.copy_from_slice(&cand_t);
                omega = cand_omega;
                accepted = true;
                break;
            }
            step *= 0.5;
        }

        if let Some(tr) = trace.as_deref_mut() {
            tr.push(omega);
        }

        if !accepted {
            // The line search stalled before the gradient vanished.
            break;
        }

        if norm2(&lambda) > cfg.lambda_cap {
            // Unbounded dual: the hull of the rows excludes zero.
            return Ok(hull_failure(m));
        }
    }

    // Not converged within the budget; report the best feasible point so far.
    if norm2(&lambda) > cfg.lambda_cap {
        return Ok(hull_failure(m));
    }
    let weights: Vec<f64> = t.iter().map(|&ti| 1.0 / (n as f64 * ti)).collect();
    Ok(InnerSolution {
        status: SolveStatus::IterationCap,
        lambda,
        weights,
        w_value: omega.max(0.0),
    })
}

fn hull_failure(m: usize) -> InnerSolution {
    InnerSolution {
        status: SolveStatus::HullFailure,
        lambda: vec![0.0; m],
        weights: vec![],
        w_value: f64::INFINITY,
    }
}

/// PELR W_n(theta) for `model` on `data`, via the plain profile EL.
pub fn profile_pelr(
    data: &Dataset,
    model: &EstimatingModel,
    theta: &[f64],
    cfg: &InnerSolveConfig,
) -> Result<ELEvaluation> {
    let g = GMatrix::from_model(data, model, theta)?;
    let rows = g.n();
    let inner = lagrange_solve(&g, cfg)?;
    Ok(ELEvaluation::from_inner(inner, rows))
}

/// Adjusted-EL PELR: the profile EL on the sample augmented with the pseudo
/// observation -mean(g). The augmented hull always contains zero, so this
/// variant never reports a hull failure.
pub fn adjusted_pelr(
    data: &Dataset,
    model: &EstimatingModel,
    theta: &[f64],
    cfg: &InnerSolveConfig,
) -> Result<ELEvaluation> {
    let g = GMatrix::from_model(data, model, theta)?;
    let aug = g.adjoin_pseudo_row()?;
    let rows = aug.n();
    let inner = lagrange_solve(&aug, cfg)?;
    Ok(ELEvaluation::from_inner(inner, rows))
}
