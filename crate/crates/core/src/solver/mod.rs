//! The predictor-corrector proximal multiplier iteration.
//!
//! Every iteration makes two column-partitioned passes. The predictor pass at
//! `x^k` yields the Hessian products, the Lagrangian gradient, the constraint
//! and equality values and the norms the step rule needs; from those the
//! step `rho`, the dual predictors `(mu, nu)` and the primal predictors
//! `(y, v)` follow locally. The corrector pass at `y` yields what the primal
//! correctors `(x, u)` and the dual correctors `(lambda, gamma)` need.

mod state;
mod step;
mod sweep;
pub mod updates;

pub use state::{IterateState, StartPoint};
pub use step::{
    positive_root, step_components, update_epsilons, update_weights, StepInputs, StepSizeState, WeightMode,
    DEFAULT_BIG_M, N_COMPONENTS, WEIGHT_FLOOR,
};
pub(crate) use sweep::clip_gradient;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    classify_termination, compute_residuals, res1_from_parts, res2_from_parts, ResidualReport,
    TerminationKind, TerminationStatus,
};
use crate::dist::{Cluster, CommStats};
use crate::error::{Error, Result};
use crate::matrix::dot;
use crate::model::{compute_norms, ProblemNorms, QcqpProblem};
use sweep::{equality_step, free_step, inequality_step, projected_step, run_pass, PassKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Both residuals must drop below this.
    pub tol: f64,
    pub max_iters: usize,
    pub n_workers: usize,
    pub eps0: f64,
    pub weight_mode: WeightMode,
    /// Value of the second step component when a constraint is idle.
    pub big_m: f64,
    /// Residuals are computed and termination tested every this many
    /// iterations.
    pub trace_every: usize,
    /// Number of residual checks the divergence and plateau tests look at.
    pub divergence_window: usize,
    pub divergence_threshold: f64,
    pub plateau_rel_change: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-3,
            max_iters: 200_000,
            n_workers: 1,
            eps0: 0.0,
            weight_mode: WeightMode::Adaptive,
            big_m: DEFAULT_BIG_M,
            trace_every: 10,
            divergence_window: 50,
            divergence_threshold: 1e4,
            plateau_rel_change: 1e-6,
        }
    }
}

impl SolverConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Spec(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iters < 1 {
            return Err(Error::Spec("max_iters must be at least 1".into()));
        }
        if self.n_workers < 1 {
            return Err(Error::Spec("n_workers must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.eps0) {
            return Err(Error::Spec(format!("eps0 must lie in [0, 1), got {}", self.eps0)));
        }
        if !(self.big_m > 0.0) {
            return Err(Error::Spec(format!("big_m must be > 0, got {}", self.big_m)));
        }
        if self.trace_every < 1 {
            return Err(Error::Spec("trace_every must be at least 1".into()));
        }
        Ok(())
    }
}

/// One residual check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub rho: f64,
    pub res1: f64,
    pub res2: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoSummary {
    pub min: f64,
    pub max: f64,
    #[serde(rename = "final")]
    pub last: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: TerminationStatus,
    /// Number of completed updates; the returned iterate is `x^iterations`.
    pub iterations: usize,
    pub objective: f64,
    pub res1: f64,
    pub res2: f64,
    pub rho: RhoSummary,
    pub comm: CommStats,
    pub n_workers: usize,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
    pub gamma: Vec<f64>,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
    #[serde(skip)]
    pub step: StepSizeState,
}

/// Communication of one full iteration: both passes.
pub fn analytic_comm_per_iteration(n_x: usize, n_quad: usize, n_eq: usize) -> CommStats {
    let mut s = predictor_pass_comm(n_x, n_quad, n_eq);
    for _ in 0..=n_quad {
        s.record_reduce(n_x);
        s.record_scatter(n_x);
    }
    s.record_reduce(n_quad + n_eq);
    s
}

/// Communication of one predictor pass, which is also what the terminating
/// residual check costs.
pub fn predictor_pass_comm(n_x: usize, n_quad: usize, n_eq: usize) -> CommStats {
    let mut s = CommStats::default();
    for _ in 0..=n_quad {
        s.record_reduce(n_x);
        s.record_scatter(n_x);
    }
    s.record_reduce(n_quad + 1 + n_eq + 3);
    s
}

/// Total communication of a solve that performed `iterations` updates.
pub fn analytic_comm_total(n_x: usize, n_quad: usize, n_eq: usize, iterations: usize) -> CommStats {
    analytic_comm_per_iteration(n_x, n_quad, n_eq).scaled(iterations as u64)
        + predictor_pass_comm(n_x, n_quad, n_eq)
}

pub struct Solver<'p> {
    problem: &'p QcqpProblem,
    config: SolverConfig,
    norms: ProblemNorms,
    cluster: Cluster,
}

impl<'p> Solver<'p> {
    /// Checks the configuration and the problem dimensions. Symmetry and
    /// semidefiniteness are the caller's business (see
    /// [`crate::model::validate`]).
    pub fn new(problem: &'p QcqpProblem, config: SolverConfig) -> Result<Self> {
        config.check()?;
        problem.check_dimensions()?;
        let cluster = Cluster::new(problem.n_x, config.n_workers)?;
        Ok(Solver {
            problem,
            norms: compute_norms(problem),
            config,
            cluster,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn norms(&self) -> &ProblemNorms {
        &self.norms
    }

    pub fn run(&mut self, start: &StartPoint) -> Result<SolveReport> {
        self.run_observed(start, |_, _| {})
    }

    /// Like [`Self::run`], calling `observer` after every completed update
    /// with the new iterate and the step state that produced it.
    pub fn run_observed<F>(&mut self, start: &StartPoint, mut observer: F) -> Result<SolveReport>
    where
        F: FnMut(&IterateState, &StepSizeState),
    {
        let problem = self.problem;
        let cfg = self.config.clone();
        let mut state = IterateState::from_start(problem, start)?;
        let mut step = StepSizeState::new(cfg.eps0, cfg.big_m, cfg.weight_mode);
        self.cluster.reset_stats();

        let mut trace: Vec<TraceRow> = Vec::new();
        let mut checks: Vec<ResidualReport> = Vec::new();
        let mut rho_min = f64::INFINITY;
        let mut rho_max = f64::NEG_INFINITY;
        let mut objective;

        let status = loop {
            let k = state.k;
            let pass = run_pass(
                &mut self.cluster,
                problem,
                PassKind::Predictor,
                &state.x,
                &state.lambda,
                &state.gamma,
            )?;
            let values = pass.constraint_values(problem, &state.u);
            let eq_res = pass.equality_residual(problem, &state.u);
            let grad_u = problem.lagrangian_grad_u(&state.lambda, &state.gamma);
            objective = pass.quad[0] + dot(&problem.lin_u[0], &state.u) + problem.constant[0];

            let rho = step.compute(
                &self.norms,
                &StepInputs {
                    constraint_values: &values,
                    lambda: &state.lambda,
                    grad_norm: pass.grad_norm_sq.sqrt(),
                    x_norm: pass.point_norm_sq.sqrt(),
                },
            );
            rho_min = rho_min.min(rho);
            rho_max = rho_max.max(rho);

            if k % cfg.trace_every == 0 || k >= cfg.max_iters {
                let report = ResidualReport {
                    iter: k,
                    res1: res1_from_parts(problem.n_x, pass.clipped_sq, &grad_u),
                    res2: res2_from_parts(&state.lambda, &values, &eq_res),
                };
                trace.push(TraceRow {
                    iter: k,
                    rho,
                    res1: report.res1,
                    res2: report.res2,
                    objective,
                });
                checks.push(report);
                if let Some(status) = classify_termination(&checks, &cfg) {
                    break status;
                }
            }
            if k >= cfg.max_iters {
                break TerminationStatus::new(
                    TerminationKind::MaxItersExceeded,
                    format!("no termination test passed within {} iterations", cfg.max_iters),
                );
            }
            if !(rho.is_finite() && rho > 0.0) {
                break TerminationStatus::new(
                    TerminationKind::Diverged,
                    format!("step size {rho:e} at iteration {k}"),
                );
            }

            let mu = inequality_step(&state.lambda, &values, rho);
            let nu = equality_step(&state.gamma, &eq_res, rho);
            let y = projected_step(&self.cluster, problem, &state.x, &pass.grad, rho);
            let v = free_step(&state.u, &grad_u, rho);

            let corr = run_pass(&mut self.cluster, problem, PassKind::Corrector, &y, &mu, &nu)?;
            let x_next = projected_step(&self.cluster, problem, &state.x, &corr.grad, rho);
            let u_next = free_step(&state.u, &problem.lagrangian_grad_u(&mu, &nu), rho);
            let values_y = corr.constraint_values(problem, &v);
            let eq_res_y = corr.equality_residual(problem, &v);
            let lambda_next = inequality_step(&state.lambda, &values_y, rho);
            let gamma_next = equality_step(&state.gamma, &eq_res_y, rho);

            state.x = x_next;
            state.u = u_next;
            state.lambda = lambda_next;
            state.gamma = gamma_next;
            state.y = y;
            state.v = v;
            state.mu = mu;
            state.nu = nu;
            state.k += 1;
            step.learn();
            observer(&state, &step);

            if !state.is_finite() {
                break TerminationStatus::new(
                    TerminationKind::Diverged,
                    format!("non-finite iterate after iteration {}", state.k),
                );
            }
        };

        let (res1, res2) = match (status.kind, trace.last()) {
            (TerminationKind::Diverged, _) | (_, None) => {
                let r = compute_residuals(&state, problem);
                objective = problem.objective(&state.x, &state.u);
                (r.res1, r.res2)
            }
            (_, Some(row)) => (row.res1, row.res2),
        };
        Ok(SolveReport {
            status,
            iterations: state.k,
            objective,
            res1,
            res2,
            rho: RhoSummary {
                min: rho_min,
                max: rho_max,
                last: step.rho,
            },
            comm: self.cluster.stats(),
            n_workers: self.cluster.n_workers(),
            x: state.x,
            u: state.u,
            lambda: state.lambda,
            gamma: state.gamma,
            trace,
            step,
        })
    }
}

/// Solves `problem` from `start` (zeros when `None`).
pub fn solve(
    problem: &QcqpProblem,
    config: &SolverConfig,
    start: Option<&StartPoint>,
) -> Result<SolveReport> {
    let default = StartPoint::default();
    Solver::new(problem, config.clone())?.run(start.unwrap_or(&default))
}
