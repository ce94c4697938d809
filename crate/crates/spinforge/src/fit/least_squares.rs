//! Bounded nonlinear least squares by Levenberg–Marquardt damping.
//!
//! The engine minimizes ½‖r(x)‖² over a box lo ≤ x ≤ hi with
//! central-difference Jacobians and Marquardt diagonal scaling
//! (JᵀJ + λ·diag(JᵀJ)). Steps are projected onto the box and accepted only
//! when they lower the cost, so the cost history is monotone. Stopping:
//! relative cost change below 1e-10, gradient norm below 1e-8, an
//! essentially exact fit, or 500 iterations. Everything is deterministic
//! for fixed inputs.

use serde::Serialize;

use crate::error::{Error, Result};

/// One fit parameter with box bounds.
#[derive(Debug, Clone, Serialize)]
pub struct ParamSpec {
    pub name: String,
    pub init: f64,
    pub lo: f64,
    pub hi: f64,
}

impl ParamSpec {
    pub fn new(name: impl Into<String>, init: f64, lo: f64, hi: f64) -> Self {
        ParamSpec { name: name.into(), init, lo, hi }
    }

    /// Unbounded parameter.
    pub fn free(name: impl Into<String>, init: f64) -> Self {
        ParamSpec::new(name, init, f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Residual weighting.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Loss {
    #[default]
    Squares,
    /// Soft-L1 robust loss with the given scale.
    SoftL1 { scale: f64 },
}

impl Loss {
    fn transform(&self, r: f64) -> f64 {
        match self {
            Loss::Squares => r,
            Loss::SoftL1 { scale } => {
                let z = r / scale;
                scale * (2.0 * ((1.0 + z * z).sqrt() - 1.0)).sqrt() * r.signum()
            }
        }
    }
}

/// Residual-vector callback: parameter values in, residuals out.
pub type ResidualFn<'a> = Box<dyn Fn(&[f64]) -> Result<Vec<f64>> + 'a>;

/// A residual-vector minimization problem.
pub struct FitProblem<'a> {
    pub params: Vec<ParamSpec>,
    pub residuals: ResidualFn<'a>,
    pub loss: Loss,
}

impl<'a> FitProblem<'a> {
    pub fn new(
        params: Vec<ParamSpec>,
        residuals: impl Fn(&[f64]) -> Result<Vec<f64>> + 'a,
    ) -> Self {
        FitProblem { params, residuals: Box::new(residuals), loss: Loss::Squares }
    }

    fn validate(&self) -> Result<()> {
        if self.params.is_empty() {
            return Err(Error::invalid("fit needs at least one parameter"));
        }
        for p in &self.params {
            let ordered = p.lo <= p.init && p.init <= p.hi;
            if !ordered || p.init.is_nan() {
                return Err(Error::invalid(format!(
                    "parameter {}: bounds must satisfy lo <= init <= hi, got {} <= {} <= {}",
                    p.name, p.lo, p.init, p.hi
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitStatus {
    Converged,
    MaxIter,
    Singular,
}

/// Fit estimates with linearized 95% confidence intervals.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub names: Vec<String>,
    pub estimates: Vec<f64>,
    /// Symmetric 95% interval half-widths (NaN when not computable).
    pub ci95: Vec<f64>,
    /// Root-mean-square residual at the solution.
    pub rms: f64,
    /// Final cost ½‖r‖².
    pub cost: f64,
    pub status: FitStatus,
    pub iterations: usize,
    /// Whether each estimate sits on a bound.
    pub active_bounds: Vec<bool>,
    /// Accepted-cost trajectory, starting at the initial cost.
    pub cost_history: Vec<f64>,
    /// σ_min/σ_max of the final Jacobian.
    pub singular_value_ratio: f64,
    /// Set when the final Jacobian is rank-deficient beyond 1e-6.
    pub identifiability_warning: Option<String>,
}

impl FitResult {
    pub fn estimate(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|k| self.estimates[k])
    }
}

const MAX_ITERATIONS: usize = 500;
const COST_TOL: f64 = 1e-10;
const GRAD_TOL: f64 = 1e-8;
const JACOBIAN_REL_STEP: f64 = 6.055e-6; // cbrt(f64 eps)

/// Minimize the problem, returning estimates, intervals, and diagnostics.
pub fn least_squares(problem: &FitProblem) -> Result<FitResult> {
    problem.validate()?;
    let n = problem.params.len();
    let lo: Vec<f64> = problem.params.iter().map(|p| p.lo).collect();
    let hi: Vec<f64> = problem.params.iter().map(|p| p.hi).collect();
    let clamp = |x: &mut [f64]| {
        for k in 0..n {
            x[k] = x[k].clamp(lo[k], hi[k]);
        }
    };

    let eval = |x: &[f64]| -> Result<Vec<f64>> {
        let raw = (problem.residuals)(x)?;
        Ok(raw.into_iter().map(|r| problem.loss.transform(r)).collect())
    };

    let mut x: Vec<f64> = problem.params.iter().map(|p| p.init).collect();
    clamp(&mut x);
    let mut r = eval(&x)?;
    let m = r.len();
    if m < n {
        return Err(Error::invalid(format!(
            "{m} residuals cannot determine {n} parameters"
        )));
    }
    let mut cost = 0.5 * r.iter().map(|v| v * v).sum::<f64>();
    let initial_cost = cost;
    let mut cost_history = vec![cost];

    let mut lambda = 1e-6;
    let mut status = FitStatus::MaxIter;
    let mut iterations = 0;
    let mut jac = jacobian(&eval, &x, m)?;

    while iterations < MAX_ITERATIONS {
        iterations += 1;

        // g = Jᵀ r, JtJ = Jᵀ J
        #[allow(clippy::needless_range_loop)]
        let mut g = vec![0.0; n];
        let mut jtj = vec![vec![0.0; n]; n];
        for i in 0..m {
            for a in 0..n {
                g[a] += jac[i][a] * r[i];
                for b in a..n {
                    jtj[a][b] += jac[i][a] * jac[i][b];
                }
            }
        }
        #[allow(clippy::needless_range_loop)]
        for a in 0..n {
            for b in 0..a {
                jtj[a][b] = jtj[b][a];
            }
        }

        let grad_norm = g.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if grad_norm < GRAD_TOL {
            status = FitStatus::Converged;
            break;
        }

        // damped step, retried with growing λ until the cost drops
        let mut moved = false;
        loop {
            let step = match solve_damped(&jtj, &g, lambda) {
                Some(s) => s,
                None => {
                    return finish(
                        problem,
                        x,
                        r,
                        cost,
                        FitStatus::Singular,
                        iterations,
                        cost_history,
                        &jac,
                        &lo,
                        &hi,
                    );
                }
            };
            let mut x_new: Vec<f64> = x.iter().zip(&step).map(|(xv, s)| xv + s).collect();
            clamp(&mut x_new);
            if x_new == x {
                // fully blocked by the box; treat like a rejected step
                lambda *= 10.0;
                if lambda > 1e14 {
                    status = FitStatus::Converged; // pinned at the boundary
                    moved = false;
                    break;
                }
                continue;
            }
            let r_new = eval(&x_new)?;
            let cost_new = 0.5 * r_new.iter().map(|v| v * v).sum::<f64>();
            if cost_new < cost {
                let rel_drop = (cost - cost_new) / cost.max(f64::MIN_POSITIVE);
                x = x_new;
                r = r_new;
                cost = cost_new;
                cost_history.push(cost);
                lambda = (lambda / 10.0).max(1e-14);
                moved = true;
                if rel_drop < COST_TOL || cost <= initial_cost * 1e-20 {
                    status = FitStatus::Converged;
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e14 {
                // no downhill direction left at any damping
                status = FitStatus::Converged;
                break;
            }
        }

        if status == FitStatus::Converged {
            break;
        }
        if moved {
            jac = jacobian(&eval, &x, m)?;
        }
    }

    finish(problem, x, r, cost, status, iterations, cost_history, &jac, &lo, &hi)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    problem: &FitProblem,
    x: Vec<f64>,
    r: Vec<f64>,
    cost: f64,
    status: FitStatus,
    iterations: usize,
    cost_history: Vec<f64>,
    jac: &[Vec<f64>],
    lo: &[f64],
    hi: &[f64],
) -> Result<FitResult> {
    let n = x.len();
    let m = r.len();
    let names: Vec<String> = problem.params.iter().map(|p| p.name.clone()).collect();
    let active_bounds: Vec<bool> =
        x.iter().enumerate().map(|(k, &v)| v == lo[k] || v == hi[k]).collect();

    let (sv_ratio, ci95) = jacobian_statistics(jac, m, n, cost);
    let identifiability_warning = if sv_ratio < 1e-6 {
        Some(format!(
            "Jacobian is rank-deficient (σ_min/σ_max = {sv_ratio:.2e}); some parameters are not \
             independently determined"
        ))
    } else {
        None
    };

    Ok(FitResult {
        names,
        estimates: x,
        ci95,
        rms: (2.0 * cost / m as f64).sqrt(),
        cost,
        status,
        iterations,
        active_bounds,
        cost_history,
        singular_value_ratio: sv_ratio,
        identifiability_warning,
    })
}

fn jacobian_statistics(jac: &[Vec<f64>], m: usize, n: usize, cost: f64) -> (f64, Vec<f64>) {
    let jm = nalgebra::DMatrix::<f64>::from_fn(m, n, |i, j| jac[i][j]);
    let svd = jm.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = if smax > 0.0 { smin / smax } else { 0.0 };

    // linearized covariance (JᵀJ)⁻¹ scaled by the residual variance
    let ci = if m > n {
        let sigma2 = 2.0 * cost / (m - n) as f64;
        match (jm.transpose() * &jm).try_inverse() {
            Some(cov) => (0..n).map(|k| 1.96 * (sigma2 * cov[(k, k)]).max(0.0).sqrt()).collect(),
            None => vec![f64::NAN; n],
        }
    } else {
        vec![f64::NAN; n]
    };
    (ratio, ci)
}

/// Central-difference Jacobian of the residual vector.
fn jacobian(
    eval: &impl Fn(&[f64]) -> Result<Vec<f64>>,
    x: &[f64],
    m: usize,
) -> Result<Vec<Vec<f64>>> {
    let n = x.len();
    let mut jac = vec![vec![0.0; n]; m];
    let mut xp = x.to_vec();
    for k in 0..n {
        let h = JACOBIAN_REL_STEP * x[k].abs().max(1.0);
        xp[k] = x[k] + h;
        let rp = eval(&xp)?;
        xp[k] = x[k] - h;
        let rm = eval(&xp)?;
        xp[k] = x[k];
        if rp.len() != m || rm.len() != m {
            return Err(Error::DimensionMismatch(
                "residual vector changed length during differentiation".into(),
            ));
        }
        for i in 0..m {
            jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Solve (JᵀJ + λ·diag(JᵀJ))·δ = −g. Returns None when the damped normal
/// matrix is numerically singular.
fn solve_damped(jtj: &[Vec<f64>], g: &[f64], lambda: f64) -> Option<Vec<f64>> {
    let n = g.len();
    let mean_diag = (0..n).map(|k| jtj[k][k]).sum::<f64>() / n as f64;
    let mut a = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| jtj[i][j]);
    for k in 0..n {
        // zero diagonal entries still get damped so the system stays definite
        let d = if jtj[k][k] > 0.0 { jtj[k][k] } else { mean_diag.max(1e-30) };
        a[(k, k)] += lambda * d;
    }
    let b = nalgebra::DVector::<f64>::from_fn(n, |k, _| -g[k]);
    let chol = a.cholesky()?;
    let step = chol.solve(&b);
    if step.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(step.iter().cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_model_recovered_immediately() {
        let xs: Vec<f64> = (1..=10).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.25 * x).collect();
        let problem = FitProblem::new(vec![ParamSpec::free("p", 1.0)], move |p| {
            Ok(xs.iter().zip(&ys).map(|(x, y)| p[0] * x - y).collect())
        });
        let fit = least_squares(&problem).unwrap();
        assert_eq!(fit.status, FitStatus::Converged);
        assert!(fit.iterations <= 2, "iterations {}", fit.iterations);
        assert!((fit.estimates[0] - 3.25).abs() < 1e-9);
    }

    #[test]
    fn rosenbrock_valley() {
        let problem = FitProblem::new(
            vec![ParamSpec::free("x", -1.2), ParamSpec::free("y", 1.0)],
            |p| Ok(vec![10.0 * (p[1] - p[0] * p[0]), 1.0 - p[0]]),
        );
        let fit = least_squares(&problem).unwrap();
        assert_eq!(fit.status, FitStatus::Converged);
        assert!((fit.estimates[0] - 1.0).abs() < 1e-6, "x = {}", fit.estimates[0]);
        assert!((fit.estimates[1] - 1.0).abs() < 1e-6, "y = {}", fit.estimates[1]);
    }

    #[test]
    fn optimum_on_bound_is_clamped_and_flagged() {
        // unconstrained optimum at p = 5, box caps it at 2
        let problem = FitProblem {
            params: vec![ParamSpec::new("p", 1.0, 0.0, 2.0)],
            residuals: Box::new(|p: &[f64]| Ok(vec![p[0] - 5.0, 0.1 * (p[0] - 5.0)])),
            loss: Loss::Squares,
        };
        let fit = least_squares(&problem).unwrap();
        assert_eq!(fit.estimates[0], 2.0);
        assert!(fit.active_bounds[0]);
    }

    #[test]
    fn cost_history_is_monotone() {
        let xs: Vec<f64> = (0..40).map(|k| 0.1 * k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * (-x / 1.7).exp() + 0.3).collect();
        let problem = FitProblem::new(
            vec![
                ParamSpec::new("amp", 1.0, 0.0, 10.0),
                ParamSpec::new("tau", 0.8, 0.01, 50.0),
                ParamSpec::free("base", 0.0),
            ],
            move |p| {
                Ok(xs.iter().zip(&ys).map(|(x, y)| p[0] * (-x / p[1]).exp() + p[2] - y).collect())
            },
        );
        let fit = least_squares(&problem).unwrap();
        assert!(fit.cost_history.windows(2).all(|w| w[1] < w[0]));
        assert!((fit.estimates[1] - 1.7).abs() < 1e-6);
    }

    #[test]
    fn scaling_residuals_leaves_argmin_fixed() {
        let make = |scale: f64| {
            FitProblem::new(
                vec![ParamSpec::free("a", 0.3), ParamSpec::free("b", -0.2)],
                move |p: &[f64]| {
                    Ok((0..20)
                        .map(|k| {
                            let x = 0.25 * k as f64;
                            scale * (p[0] * x + p[1] * x * x - (1.4 * x - 0.7 * x * x))
                        })
                        .collect())
                },
            )
        };
        let f1 = least_squares(&make(1.0)).unwrap();
        let f2 = least_squares(&make(37.5)).unwrap();
        for k in 0..2 {
            assert!((f1.estimates[k] - f2.estimates[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn degenerate_parameters_warn() {
        // p0 and p1 only appear as a sum: Jacobian is rank 1
        let problem = FitProblem::new(
            vec![ParamSpec::free("p0", 0.1), ParamSpec::free("p1", 0.2)],
            |p| Ok((0..5).map(|k| (p[0] + p[1]) * k as f64 - 2.0 * k as f64).collect()),
        );
        let fit = least_squares(&problem).unwrap();
        assert!(fit.identifiability_warning.is_some());
        assert!(fit.singular_value_ratio < 1e-6);
    }

    #[test]
    fn jacobian_matches_richardson_extrapolation() {
        let model = |p: &[f64]| -> Result<Vec<f64>> {
            Ok((0..8)
                .map(|k| {
                    let x = 0.3 * k as f64;
                    (p[0] * x).exp() + p[1] * x * x
                })
                .collect())
        };
        let x = vec![0.7, -1.3];
        let j = jacobian(&model, &x, 8).unwrap();
        // Richardson: D(h/2) refined against D(h)
        let richardson = |k: usize| -> Vec<f64> {
            let h = JACOBIAN_REL_STEP * x[k].abs().max(1.0);
            let diff = |h: f64| -> Vec<f64> {
                let mut xp = x.clone();
                xp[k] += h;
                let rp = model(&xp).unwrap();
                xp[k] = x[k] - h;
                let rm = model(&xp).unwrap();
                rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect()
            };
            let d1 = diff(h);
            let d2 = diff(h / 2.0);
            d1.iter().zip(&d2).map(|(a, b)| (4.0 * b - a) / 3.0).collect()
        };
        #[allow(clippy::needless_range_loop)]
        for k in 0..2 {
            let reference = richardson(k);
            for i in 0..8 {
                let rel = (j[i][k] - reference[i]).abs() / reference[i].abs().max(1.0);
                assert!(rel < 1e-6, "J[{i}][{k}]: {} vs {}", j[i][k], reference[i]);
            }
        }
    }

    #[test]
    fn soft_l1_downweights_outliers() {
        let xs: Vec<f64> = (0..30).map(|k| 0.2 * k as f64).collect();
        let mut ys: Vec<f64> = xs.iter().map(|x| 1.5 * x).collect();
        ys[7] += 40.0; // gross outlier
        let xs2 = xs.clone();
        let ys2 = ys.clone();
        let plain = FitProblem::new(vec![ParamSpec::free("p", 1.0)], move |p| {
            Ok(xs.iter().zip(&ys).map(|(x, y)| p[0] * x - y).collect())
        });
        let robust = FitProblem {
            params: vec![ParamSpec::free("p", 1.0)],
            residuals: Box::new(move |p: &[f64]| {
                Ok(xs2.iter().zip(&ys2).map(|(x, y)| p[0] * x - y).collect())
            }),
            loss: Loss::SoftL1 { scale: 1.0 },
        };
        let p_plain = least_squares(&plain).unwrap().estimates[0];
        let p_robust = least_squares(&robust).unwrap().estimates[0];
        assert!((p_robust - 1.5).abs() < (p_plain - 1.5).abs() / 3.0);
    }

    #[test]
    fn invalid_bounds_rejected() {
        let problem = FitProblem::new(vec![ParamSpec::new("p", 5.0, 0.0, 2.0)], |_| Ok(vec![0.0]));
        assert!(least_squares(&problem).is_err());
    }
}
