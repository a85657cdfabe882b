//! Reference solver for small instances: an augmented Lagrangian outer loop
//! around an accelerated projected-gradient inner solve. It shares nothing
//! with the predictor-corrector iteration besides the problem evaluation
//! routines, which makes it a usable cross-check.

use crate::error::{Error, Result};
use crate::matrix::{dot, norm_sq};
use crate::model::{project_box, QcqpProblem};

use super::{clipped_gradient, kkt_residual_max};

/// Largest `n_x` the oracle accepts.
pub const ORACLE_MAX_DIM: usize = 200;

const MAX_OUTER: usize = 60;
const MAX_INNER: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
    pub gamma: Vec<f64>,
    pub objective: f64,
    /// `kkt_residual_max` at the returned point.
    pub kkt: f64,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
}

struct Penalized<'a> {
    problem: &'a QcqpProblem,
    lambda: &'a [f64],
    gamma: &'a [f64],
    penalty: f64,
}

impl Penalized<'_> {
    fn split<'z>(&self, z: &'z [f64]) -> (&'z [f64], &'z [f64]) {
        z.split_at(self.problem.n_x)
    }

    /// Shifted multipliers `max(0, lambda + c g)` and `gamma + c h`.
    fn shifted(&self, x: &[f64], u: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let g = self.problem.constraint_values(x, u);
        let h = self.problem.equality_residual(x, u);
        let w = self
            .lambda
            .iter()
            .zip(&g)
            .map(|(l, gi)| (l + self.penalty * gi).max(0.0))
            .collect();
        let s = self
            .gamma
            .iter()
            .zip(&h)
            .map(|(m, hi)| m + self.penalty * hi)
            .collect();
        (w, s, h)
    }

    fn value(&self, z: &[f64]) -> f64 {
        let (x, u) = self.split(z);
        let (w, _, h) = self.shifted(x, u);
        let c = self.penalty;
        self.problem.objective(x, u)
            + (norm_sq(&w) - norm_sq(self.lambda)) / (2.0 * c)
            + dot(self.gamma, &h)
            + 0.5 * c * norm_sq(&h)
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        let (x, u) = self.split(z);
        let (w, s, _) = self.shifted(x, u);
        let mut g = self.problem.lagrangian_grad_x(x, &w, &s);
        g.extend(self.problem.lagrangian_grad_u(&w, &s));
        g
    }

    fn project(&self, z: &mut [f64]) {
        for (zj, &ub) in z.iter_mut().zip(&self.problem.x_upper) {
            *zj = project_box(*zj, ub);
        }
    }

    /// Max-norm of the box-clipped gradient.
    fn stationarity(&self, z: &[f64], grad: &[f64]) -> f64 {
        let n_x = self.problem.n_x;
        let mut worst: f64 = 0.0;
        for (j, &g) in grad.iter().enumerate() {
            let v = if j < n_x {
                clipped_gradient(z[j], self.problem.x_upper[j], g)
            } else {
                g
            };
            worst = worst.max(v.abs());
        }
        worst
    }

    /// Accelerated projected gradient with backtracking and function-value
    /// restart. Returns the number of iterations used.
    fn minimize(&self, z: &mut Vec<f64>, tol: f64, lipschitz: &mut f64) -> usize {
        let mut prev = z.clone();
        let mut f_z = self.value(z);
        let mut t: f64 = 1.0;
        for it in 1..=MAX_INNER {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let beta = (t - 1.0) / t_next;
            let anchor: Vec<f64> = z.iter().zip(&prev).map(|(a, b)| a + beta * (a - b)).collect();
            let f_a = self.value(&anchor);
            let g_a = self.gradient(&anchor);

            let (cand, f_c) = loop {
                let mut cand: Vec<f64> = anchor.iter().zip(&g_a).map(|(a, g)| a - g / *lipschitz).collect();
                self.project(&mut cand);
                let d: Vec<f64> = cand.iter().zip(&anchor).map(|(c, a)| c - a).collect();
                let f_c = self.value(&cand);
                let model = f_a + dot(&g_a, &d) + 0.5 * *lipschitz * norm_sq(&d);
                if f_c <= model + 1e-13 * (1.0 + f_a.abs()) || *lipschitz > 1e16 {
                    break (cand, f_c);
                }
                *lipschitz *= 2.0;
            };

            if f_c > f_z && beta > 0.0 {
                // momentum overshoot: restart from the current point
                t = 1.0;
                prev = z.clone();
                continue;
            }
            prev = std::mem::replace(z, cand);
            f_z = f_c;
            t = t_next;

            let g = self.gradient(z);
            if self.stationarity(z, &g) <= tol {
                return it;
            }
        }
        MAX_INNER
    }
}

/// Solves `problem` to `kkt_residual_max <= tol`.
///
/// Fails with [`Error::Oracle`] when the outer loop does not reach the
/// tolerance, which points at the test setup rather than at the solver
/// under test.
pub fn reference_solve_small(problem: &QcqpProblem, tol: f64) -> Result<OracleSolution> {
    problem.check_dimensions()?;
    if problem.n_x > ORACLE_MAX_DIM {
        return Err(Error::Oracle(format!(
            "n_x = {} exceeds the oracle limit {ORACLE_MAX_DIM}",
            problem.n_x
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Oracle("tolerance must be positive".into()));
    }
    let n_x = problem.n_x;
    let mut z = vec![0.0; n_x + problem.n_u];
    let mut lambda = vec![0.0; problem.n_quad];
    let mut gamma = vec![0.0; problem.n_eq];
    let mut penalty = 10.0;
    let mut lipschitz = 1.0;
    let mut inner_tol = 1e-2f64.max(tol);
    let mut last_violation = f64::INFINITY;
    let mut inner_total = 0;
    let mut kkt = f64::INFINITY;

    for outer in 1..=MAX_OUTER {
        let sub = Penalized {
            problem,
            lambda: &lambda,
            gamma: &gamma,
            penalty,
        };
        inner_total += sub.minimize(&mut z, inner_tol, &mut lipschitz);
        let (x, u) = z.split_at(n_x);
        let (w, s, h) = sub.shifted(x, u);
        lambda = w;
        gamma = s;

        kkt = kkt_residual_max(x, u, &lambda, &gamma, problem);
        if kkt <= tol {
            return Ok(OracleSolution {
                x: x.to_vec(),
                u: u.to_vec(),
                objective: problem.objective(x, u),
                lambda,
                gamma,
                kkt,
                outer_iterations: outer,
                inner_iterations: inner_total,
            });
        }

        let violation = problem
            .constraint_values(x, u)
            .iter()
            .map(|g| g.max(0.0))
            .chain(h.iter().map(|v| v.abs()))
            .fold(0.0, f64::max);
        if violation > 0.25 * last_violation {
            penalty *= 10.0;
            lipschitz = lipschitz.max(1.0);
        }
        last_violation = violation;
        inner_tol = (inner_tol * 0.1).max(0.01 * tol);
    }
    Err(Error::Oracle(format!(
        "augmented Lagrangian stopped at kkt residual {kkt:e} after {MAX_OUTER} outer iterations"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ColumnMatrix;

    #[test]
    fn toy_problem() {
        let mut p = QcqpProblem::new(ColumnMatrix::identity(1), vec![-2.0], 0.0)
            .unwrap()
            .with_upper(vec![10.0]);
        p.push_quad(ColumnMatrix::identity(1), vec![0.0], vec![], -0.5);
        let s = reference_solve_small(&p, 1e-8).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-6, "{:?}", s);
        assert!((s.lambda[0] - 1.0).abs() < 1e-6, "{:?}", s);
    }

    #[test]
    fn equality_only() {
        let mut p = QcqpProblem::new(ColumnMatrix::identity(1), vec![0.0], 0.0)
            .unwrap()
            .with_upper(vec![1.0]);
        p.set_equalities(ColumnMatrix::identity(1), ColumnMatrix::zeros(1, 0), vec![0.5]);
        let s = reference_solve_small(&p, 1e-8).unwrap();
        assert!((s.x[0] - 0.5).abs() < 1e-6);
        assert!((s.gamma[0] + 0.5).abs() < 1e-6);
    }
}
