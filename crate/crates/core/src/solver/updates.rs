//! Individual predictor and corrector updates.
//!
//! The main loop fuses these into two passes per iteration; the functions
//! here run each update on its own, through the same kernels, which makes
//! them usable for inspection and testing.

use super::state::IterateState;
use super::sweep::{equality_step, free_step, inequality_step, projected_step, run_pass, PassKind};
use crate::dist::Cluster;
use crate::error::Result;
use crate::model::QcqpProblem;

/// `(mu, nu)` from the k-th iterates.
pub fn dual_predictor(
    cluster: &mut Cluster,
    problem: &QcqpProblem,
    state: &IterateState,
    rho: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let pass = run_pass(
        cluster,
        problem,
        PassKind::Predictor,
        &state.x,
        &state.lambda,
        &state.gamma,
    )?;
    let g = pass.constraint_values(problem, &state.u);
    let h = pass.equality_residual(problem, &state.u);
    Ok((
        inequality_step(&state.lambda, &g, rho),
        equality_step(&state.gamma, &h, rho),
    ))
}

/// Projected gradient step on `x` at `(x^k, lambda^k, gamma^k)`.
pub fn primal_predictor_x(
    cluster: &mut Cluster,
    problem: &QcqpProblem,
    state: &IterateState,
    rho: f64,
) -> Result<Vec<f64>> {
    let pass = run_pass(
        cluster,
        problem,
        PassKind::Predictor,
        &state.x,
        &state.lambda,
        &state.gamma,
    )?;
    Ok(projected_step(cluster, problem, &state.x, &pass.grad, rho))
}

/// Step from `x^k` along the gradient evaluated at the predictors.
pub fn primal_corrector_x(
    cluster: &mut Cluster,
    problem: &QcqpProblem,
    state: &IterateState,
    rho: f64,
    y: &[f64],
    mu: &[f64],
    nu: &[f64],
) -> Result<Vec<f64>> {
    let pass = run_pass(cluster, problem, PassKind::Corrector, y, mu, nu)?;
    Ok(projected_step(cluster, problem, &state.x, &pass.grad, rho))
}

pub fn primal_predictor_u(problem: &QcqpProblem, state: &IterateState, rho: f64) -> Vec<f64> {
    let g = problem.lagrangian_grad_u(&state.lambda, &state.gamma);
    free_step(&state.u, &g, rho)
}

pub fn primal_corrector_u(
    problem: &QcqpProblem,
    state: &IterateState,
    rho: f64,
    mu: &[f64],
    nu: &[f64],
) -> Vec<f64> {
    let g = problem.lagrangian_grad_u(mu, nu);
    free_step(&state.u, &g, rho)
}

/// `(lambda^{k+1}, gamma^{k+1})`, anchored at the k-th multipliers and
/// evaluated at the primal predictors `(y, v)`.
pub fn dual_corrector(
    cluster: &mut Cluster,
    problem: &QcqpProblem,
    state: &IterateState,
    rho: f64,
    y: &[f64],
    v: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let pass = run_pass(
        cluster,
        problem,
        PassKind::Corrector,
        y,
        &state.lambda,
        &state.gamma,
    )?;
    let g = pass.constraint_values(problem, v);
    let h = pass.equality_residual(problem, v);
    Ok((
        inequality_step(&state.lambda, &g, rho),
        equality_step(&state.gamma, &h, rho),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ColumnMatrix;

    fn scalar_problem(r1: f64) -> QcqpProblem {
        let mut p = QcqpProblem::new(ColumnMatrix::identity(1), vec![0.0], 0.0).unwrap();
        p.push_quad(ColumnMatrix::identity(1), vec![0.0], vec![], r1);
        p
    }

    fn state(p: &QcqpProblem, x: Vec<f64>, lambda: Vec<f64>) -> IterateState {
        let mut s = IterateState::zeros(p);
        s.x = x;
        s.lambda = lambda;
        s
    }

    #[test]
    fn dual_predictor_examples() {
        let p = scalar_problem(-0.5);
        let mut c = Cluster::new(1, 1).unwrap();
        let (mu, nu) = dual_predictor(&mut c, &p, &state(&p, vec![1.0], vec![0.2]), 0.1).unwrap();
        assert_eq!(mu, vec![0.2]);
        assert!(nu.is_empty());
        let (mu, _) = dual_predictor(&mut c, &p, &state(&p, vec![2.0], vec![0.2]), 0.1).unwrap();
        assert!((mu[0] - 0.35).abs() < 1e-15);

        let p = scalar_problem(-1.0);
        let (mu, _) = dual_predictor(&mut c, &p, &state(&p, vec![0.0], vec![0.0]), 0.5).unwrap();
        assert_eq!(mu, vec![0.0]);
    }

    fn toy_box() -> QcqpProblem {
        QcqpProblem::new(ColumnMatrix::identity(2), vec![-2.0, 0.0], 0.0)
            .unwrap()
            .with_upper(vec![1.0, 1.0])
    }

    #[test]
    fn primal_x_examples() {
        let p = toy_box();
        let st = state(&p, vec![0.5, 0.9], vec![]);
        for workers in [1, 2] {
            let mut c = Cluster::new(2, workers).unwrap();
            let y = primal_predictor_x(&mut c, &p, &st, 0.1).unwrap();
            assert!((y[0] - 0.65).abs() < 1e-15 && (y[1] - 0.81).abs() < 1e-15);
            let x = primal_corrector_x(&mut c, &p, &st, 0.1, &[0.65, 0.81], &[], &[]).unwrap();
            assert!((x[0] - 0.635).abs() < 1e-15 && (x[1] - 0.819).abs() < 1e-15);
            let same = primal_corrector_x(&mut c, &p, &st, 0.1, &st.x, &[], &[]).unwrap();
            assert_eq!(same, y);
        }
    }

    #[test]
    fn predictor_clamps_and_fixed_point() {
        // gradient x - 1 vanishes at 0.4 when q0 = -0.4
        let p = QcqpProblem::new(ColumnMatrix::identity(1), vec![-0.4], 0.0).unwrap();
        let mut c = Cluster::new(1, 1).unwrap();
        let y = primal_predictor_x(&mut c, &p, &state(&p, vec![0.4], vec![]), 0.7).unwrap();
        assert_eq!(y, vec![0.4]);

        // bracket = 0.1 + 0.9 = 1 at x = 0.1
        let p = QcqpProblem::new(ColumnMatrix::identity(1), vec![0.9], 0.0)
            .unwrap()
            .with_upper(vec![1.0]);
        let y = primal_predictor_x(&mut c, &p, &state(&p, vec![0.1], vec![]), 0.5).unwrap();
        assert_eq!(y, vec![0.0]);
    }

    #[test]
    fn free_block_examples() {
        let p = QcqpProblem::new(ColumnMatrix::identity(1), vec![0.0], 0.0)
            .unwrap()
            .with_free_block(1, vec![1.0]);
        let mut st = IterateState::zeros(&p);
        st.u = vec![2.0];
        assert_eq!(primal_predictor_u(&p, &st, 0.5), vec![1.5]);
        assert_eq!(primal_corrector_u(&p, &st, 0.5, &[], &[]), vec![1.5]);

        let p0 = QcqpProblem::new(ColumnMatrix::identity(1), vec![0.0], 0.0)
            .unwrap()
            .with_free_block(2, vec![0.0, 0.0]);
        let mut st = IterateState::zeros(&p0);
        st.u = vec![3.0, -1.0];
        assert_eq!(primal_predictor_u(&p0, &st, 0.9), st.u);
    }

    #[test]
    fn dual_corrector_examples() {
        let p = scalar_problem(-0.5);
        let mut c = Cluster::new(1, 1).unwrap();
        let st = state(&p, vec![2.0], vec![0.3]);
        let pred = dual_predictor(&mut c, &p, &st, 0.1).unwrap();
        let corr = dual_corrector(&mut c, &p, &st, 0.1, &st.x, &st.u).unwrap();
        assert_eq!(pred, corr);

        let (lam, _) = dual_corrector(&mut c, &p, &st, 0.1, &[1.0], &[]).unwrap();
        assert_eq!(lam, vec![0.3]);

        let p = scalar_problem(-2.0);
        let st = state(&p, vec![0.0], vec![0.0]);
        let (lam, _) = dual_corrector(&mut c, &p, &st, 0.1, &[0.0], &[]).unwrap();
        assert_eq!(lam, vec![0.0]);
    }
}
