//! Shared oracles for the integration suites. Everything here is an
//! independent computation path: primal-space optimization over the
//! probability simplex, exact low-dimensional hull tests, and reference
//! constants. None of it touches the dual solver under test.

#![allow(dead_code)]

/// chi-square upper quantiles at 0.95.
pub const CHI2_1_Q95: f64 = 3.841_458_820_694_124;
pub const CHI2_2_Q95: f64 = 5.991_464_547_107_979;

/// Exact scalar hull test: the nonzero values must straddle zero with margin.
pub fn hull_interior_1d(vals: &[f64], margin: f64) -> bool {
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    lo < -margin && hi > margin
}

/// Exact planar hull test: zero is interior to the convex hull of the rows
/// iff the maximal angular gap between their directions is below pi. The
/// margin shrinks the allowed gap to keep instances well conditioned.
pub fn hull_interior_2d(rows: &[[f64; 2]], margin: f64) -> bool {
    let mut angles: Vec<f64> = rows
        .iter()
        .filter(|r| r[0].abs() > 1e-12 || r[1].abs() > 1e-12)
        .map(|r| r[1].atan2(r[0]))
        .collect();
    if angles.len() < 3 {
        return false;
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut max_gap: f64 = 0.0;
    for w in angles.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    max_gap = max_gap.max(angles[0] + 2.0 * std::f64::consts::PI - angles[angles.len() - 1]);
    max_gap < std::f64::consts::PI - margin
}

/// Dense Gaussian elimination with partial pivoting (test-local copy so the
/// oracle shares nothing with the solver under test).
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if a[piv * n + col].abs() < 1e-250 {
            return false;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        for r in col + 1..n {
            let f = a[r * n + col] / a[col * n + col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= f * a[col * n + c];
            }
            b[r] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for c in col + 1..n {
            s -= a[col * n + c] * b[c];
        }
        b[col] = s / a[col * n + col];
    }
    true
}

/// Profile EL ratio by direct constrained optimization over the probability
/// simplex: minimize -sum log(n p_i) subject to sum p_i = 1 and
/// sum p_i g_i = 0, via an augmented Lagrangian with an inner Newton solve in
/// p-space. Returns the attained objective value.
///
/// The caller must pass an instance whose hull contains zero strictly;
/// otherwise the constraint residual cannot vanish.
pub fn simplex_w_oracle(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let m = rows[0].len();
    let nc = m + 1; // constraints: mass + m moment conditions
    let nf = n as f64;

    // Constraint matrix C (nc x n): first row all ones, then g columns.
    let mut cmat = vec![0.0; nc * n];
    for i in 0..n {
        cmat[i] = 1.0;
        for j in 0..m {
            cmat[(j + 1) * n + i] = rows[i][j];
        }
    }
    let target = {
        let mut d = vec![0.0; nc];
        d[0] = 1.0;
        d
    };

    let residual = |p: &[f64]| -> Vec<f64> {
        (0..nc)
            .map(|k| (0..n).map(|i| cmat[k * n + i] * p[i]).sum::<f64>() - target[k])
            .collect()
    };
    let objective = |p: &[f64]| -> f64 { -p.iter().map(|&pi| (nf * pi).ln()).sum::<f64>() };

    let mut p = vec![1.0 / nf; n];
    let mut y = vec![0.0; nc];
    let mut mu = 10.0;
    let mut prev_cnorm = f64::INFINITY;

    for _outer in 0..80 {
        // Inner Newton on the augmented Lagrangian.
        for _inner in 0..120 {
            let c = residual(&p);
            // gradient: -1/p_i - (C' y)_i + mu (C' c)_i
            let mut grad = vec![0.0; n];
            for i in 0..n {
                let mut cty = 0.0;
                let mut ctc = 0.0;
                for k in 0..nc {
                    cty += cmat[k * n + i] * y[k];
                    ctc += cmat[k * n + i] * c[k];
                }
                grad[i] = -1.0 / p[i] - cty + mu * ctc;
            }
            let gnorm = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gnorm <= 1e-11 * nf {
                break;
            }
            // Hessian: diag(1/p_i^2) + mu C'C
            let mut hess = vec![0.0; n * n];
            for i in 0..n {
                hess[i * n + i] = 1.0 / (p[i] * p[i]);
                for j in 0..n {
                    let mut s = 0.0;
                    for k in 0..nc {
                        s += cmat[k * n + i] * cmat[k * n + j];
                    }
                    hess[i * n + j] += mu * s;
                }
            }
            let mut step = grad.iter().map(|v| -v).collect::<Vec<f64>>();
            if !solve_dense(&mut hess, &mut step, n) {
                break;
            }
            // Keep p strictly positive.
            let mut smax: f64 = 1.0;
            for i in 0..n {
                if step[i] < 0.0 {
                    smax = smax.min(0.99 * p[i] / (-step[i]));
                }
            }
            let al = |p: &[f64]| -> f64 {
                let c = residual(p);
                let lin: f64 = y.iter().zip(&c).map(|(yi, ci)| yi * ci).sum();
                let quad: f64 = c.iter().map(|ci| ci * ci).sum();
                objective(p) - lin + 0.5 * mu * quad
            };
            let base = al(&p);
            let mut s = smax;
            let mut moved = false;
            while s > 1e-16 {
                let cand: Vec<f64> = p.iter().zip(&step).map(|(pi, di)| pi + s * di).collect();
                if cand.iter().all(|&v| v > 0.0) && al(&cand) <= base {
                    p = cand;
                    moved = true;
                    break;
                }
                s *= 0.5;
            }
            if !moved {
                break;
            }
        }
        let c = residual(&p);
        let cnorm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if cnorm <= 1e-12 {
            break;
        }
        for k in 0..nc {
            y[k] -= mu * c[k];
        }
        if cnorm > 0.25 * prev_cnorm {
            mu = (mu * 10.0).min(1e14);
        }
        prev_cnorm = cnorm;
    }
    objective(&p)
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn oracle_balanced_pair() {
        // p = (1/2, 1/2) is feasible and optimal: W = 0.
        let w = simplex_w_oracle(&[vec![-1.0], vec![1.0]]);
        assert!(w.abs() < 1e-9, "oracle W {w}");
    }

    #[test]
    fn oracle_known_asymmetric_case() {
        // rows {-1, 0.5, 2}: solve the scalar dual by bisection and compare
        // the primal oracle against the dual value sum log(1 + l g).
        let rows = [-1.0, 0.5, 2.0];
        let psi = |l: f64| rows.iter().map(|&g| g / (1.0 + l * g)).sum::<f64>();
        let (mut lo, mut hi) = (-0.499999, 0.999999);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if psi(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let l = 0.5 * (lo + hi);
        let dual: f64 = rows.iter().map(|&g| (1.0 + l * g).ln()).sum();
        let primal = simplex_w_oracle(&[vec![-1.0], vec![0.5], vec![2.0]]);
        assert!(
            (dual - primal).abs() < 1e-8,
            "dual {dual} vs primal {primal}"
        );
    }

    #[test]
    fn hull_tests() {
        assert!(hull_interior_1d(&[-1.0, 2.0], 0.01));
        assert!(!hull_interior_1d(&[0.5, 2.0], 0.01));
        assert!(hull_interior_2d(
            &[[1.0, 0.0], [-1.0, 1.0], [-1.0, -1.0]],
            0.05
        ));
        assert!(!hull_interior_2d(
            &[[1.0, 0.1], [1.0, -0.1], [2.0, 0.3]],
            0.05
        ));
    }
}
