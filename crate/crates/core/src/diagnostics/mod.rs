//! Optimality residuals, termination classification and certificates.

pub mod oracle;
pub mod svm;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matrix::norm_sq;
use crate::model::QcqpProblem;
use crate::solver::{IterateState, SolverConfig};

pub use oracle::{reference_solve_small, OracleSolution, ORACLE_MAX_DIM};
pub use svm::{recover_bias, test_set_accuracy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub iter: usize,
    /// Averaged dual feasibility: box-clipped x-gradient and u-gradient of
    /// the Lagrangian.
    pub res1: f64,
    /// Averaged complementarity plus equality violation.
    pub res2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationKind {
    Converged,
    MaxItersExceeded,
    InfeasibleSuspected,
    UnboundedSuspected,
    Diverged,
}

impl TerminationKind {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            TerminationKind::Converged => 0,
            TerminationKind::MaxItersExceeded => 2,
            TerminationKind::InfeasibleSuspected => 3,
            TerminationKind::UnboundedSuspected => 4,
            TerminationKind::Diverged => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TerminationKind::Converged => "converged",
            TerminationKind::MaxItersExceeded => "max_iters_exceeded",
            TerminationKind::InfeasibleSuspected => "infeasible_suspected",
            TerminationKind::UnboundedSuspected => "unbounded_suspected",
            TerminationKind::Diverged => "diverged",
        }
    }
}

impl fmt::Display for TerminationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminationStatus {
    pub kind: TerminationKind,
    pub message: String,
}

impl TerminationStatus {
    pub fn new(kind: TerminationKind, message: impl Into<String>) -> Self {
        TerminationStatus {
            kind,
            message: message.into(),
        }
    }
}

/// Box-clipped x-gradient entry: only the part of the gradient that points
/// out of the normal cone of `[0, upper]` at `x` counts.
#[inline]
pub fn clipped_gradient(x: f64, upper: f64, g: f64) -> f64 {
    crate::solver::clip_gradient(x, upper, g)
}

fn averaged(sum_sq: f64, count: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        (sum_sq / count as f64).sqrt()
    }
}

/// `res1` from the squared clipped x-gradient sum and the u-gradient.
pub(crate) fn res1_from_parts(n_x: usize, clipped_sq: f64, grad_u: &[f64]) -> f64 {
    averaged(clipped_sq + norm_sq(grad_u), n_x + grad_u.len())
}

/// `res2` from multipliers, constraint values and the equality residual.
pub(crate) fn res2_from_parts(lambda: &[f64], values: &[f64], eq_residual: &[f64]) -> f64 {
    let comp: f64 = lambda
        .iter()
        .zip(values)
        .map(|(l, g)| (l * g.abs()).powi(2))
        .sum();
    averaged(comp + norm_sq(eq_residual), lambda.len() + eq_residual.len())
}

/// Both residuals at `(x, u, lambda, gamma)` of `state`, with `iter = state.k`.
pub fn compute_residuals(state: &IterateState, problem: &QcqpProblem) -> ResidualReport {
    let grad = problem.lagrangian_grad_x(&state.x, &state.lambda, &state.gamma);
    let clipped_sq: f64 = grad
        .iter()
        .zip(&state.x)
        .zip(&problem.x_upper)
        .map(|((&g, &x), &ub)| clipped_gradient(x, ub, g).powi(2))
        .sum();
    let grad_u = problem.lagrangian_grad_u(&state.lambda, &state.gamma);
    let values = problem.constraint_values(&state.x, &state.u);
    let eq = problem.equality_residual(&state.x, &state.u);
    ResidualReport {
        iter: state.k,
        res1: res1_from_parts(problem.n_x, clipped_sq, &grad_u),
        res2: res2_from_parts(&state.lambda, &values, &eq),
    }
}

/// Classifies a residual history; `None` means keep iterating.
///
/// The divergence and plateau tests look at the last
/// `config.divergence_window` entries and stay silent until that many
/// checks exist.
pub fn classify_termination(trace: &[ResidualReport], config: &SolverConfig) -> Option<TerminationStatus> {
    let last = trace.last()?;
    if !last.res1.is_finite() || !last.res2.is_finite() {
        return Some(TerminationStatus::new(
            TerminationKind::Diverged,
            format!("non-finite residual at iteration {}", last.iter),
        ));
    }
    let tol = config.tol;
    if last.res1 < tol && last.res2 < tol {
        return Some(TerminationStatus::new(
            TerminationKind::Converged,
            format!(
                "res1 = {:e}, res2 = {:e} below {tol:e} at iteration {}",
                last.res1, last.res2, last.iter
            ),
        ));
    }

    let window = config.divergence_window.max(2);
    if trace.len() < window {
        return None;
    }
    let recent = &trace[trace.len() - window..];

    let res2_rising = recent.windows(2).all(|w| w[1].res2 > w[0].res2);
    let res1_bounded = recent
        .iter()
        .all(|r| r.res1.is_finite() && r.res1 <= config.divergence_threshold);
    if last.res2 > config.divergence_threshold && res2_rising && res1_bounded {
        return Some(TerminationStatus::new(
            TerminationKind::InfeasibleSuspected,
            format!(
                "res2 = {:e} exceeds {:e} and rose over the last {window} checks while res1 stayed at {:e}",
                last.res2, config.divergence_threshold, last.res1
            ),
        ));
    }

    let (lo, hi) = recent
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.res1), hi.max(r.res1))
        });
    let plateau = hi > 0.0 && (hi - lo) / hi < config.plateau_rel_change;
    if last.res2 < tol && plateau && last.res1 > 10.0 * tol {
        return Some(TerminationStatus::new(
            TerminationKind::UnboundedSuspected,
            format!(
                "res1 settled at {:e} over the last {window} checks while res2 = {:e}",
                last.res1, last.res2
            ),
        ));
    }
    None
}

/// Max-norm KKT certificate: stationarity (box-clipped in x), u-gradient,
/// complementarity, inequality violation and equality violation.
pub fn kkt_residual_max(x: &[f64], u: &[f64], lambda: &[f64], gamma: &[f64], problem: &QcqpProblem) -> f64 {
    let grad = problem.lagrangian_grad_x(x, lambda, gamma);
    let stationarity = grad
        .iter()
        .zip(x)
        .zip(&problem.x_upper)
        .map(|((&g, &xj), &ub)| clipped_gradient(xj, ub, g).abs());
    let grad_u = problem.lagrangian_grad_u(lambda, gamma);
    let values = problem.constraint_values(x, u);
    let complementarity = lambda.iter().zip(&values).map(|(l, g)| (l * g).abs());
    let violation = values.iter().map(|g| g.max(0.0));
    let dual_sign = lambda.iter().map(|l| (-l).max(0.0));
    let eq = problem.equality_residual(x, u);
    stationarity
        .chain(grad_u.iter().map(|g| g.abs()))
        .chain(complementarity)
        .chain(violation)
        .chain(dual_sign)
        .chain(eq.iter().map(|h| h.abs()))
        .fold(0.0, |acc: f64, v| if v.is_nan() { f64::NAN } else { acc.max(v) })
}
