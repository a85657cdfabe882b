//! The two column-partitioned passes of an iteration.
//!
//! A pass at a point `z` forms `P_i z` for every Hessian (one reduce and one
//! scatter each), then every worker builds its slice of the Lagrangian
//! x-gradient and its share of the scalar quantities, which travel to the
//! root in a single reduce.

use crate::dist::Cluster;
use crate::error::{Error, Result};
use crate::model::QcqpProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PassKind {
    /// At `x^k` with `(lambda^k, gamma^k)`: also reduces the objective term
    /// and the norms needed by the step rule and residuals.
    Predictor,
    /// At `y` with `(mu, nu)`: constraint terms and `A y` only.
    Corrector,
}

#[derive(Debug, Clone)]
pub(crate) struct Pass {
    /// `1/2 z'P_i z + q_i'z` for `i = 0..=m1`; entry 0 is `NaN` after a
    /// corrector pass.
    pub quad: Vec<f64>,
    /// `A z`
    pub eq: Vec<f64>,
    /// `P_0 z + q_0 + sum_i w_i (P_i z + q_i) + A' g`
    pub grad: Vec<f64>,
    pub point_norm_sq: f64,
    pub grad_norm_sq: f64,
    /// Sum of squared box-clipped gradient entries.
    pub clipped_sq: f64,
}

impl Pass {
    /// Quadratic constraint values once the `u` terms are added.
    pub fn constraint_values(&self, problem: &QcqpProblem, u: &[f64]) -> Vec<f64> {
        (1..=problem.n_quad)
            .map(|i| self.quad[i] + crate::matrix::dot(&problem.lin_u[i], u) + problem.constant[i])
            .collect()
    }

    pub fn equality_residual(&self, problem: &QcqpProblem, u: &[f64]) -> Vec<f64> {
        let bu = problem.eq_u.matvec(u);
        self.eq
            .iter()
            .zip(bu)
            .zip(&problem.eq_rhs)
            .map(|((a, b), rhs)| a + b - rhs)
            .collect()
    }
}

/// Gradient entry clipped by the normal cone of `[0, upper]` at `x`.
#[inline]
pub(crate) fn clip_gradient(x: f64, upper: f64, g: f64) -> f64 {
    if x <= 0.0 {
        g.min(0.0)
    } else if x >= upper {
        g.max(0.0)
    } else {
        g
    }
}

pub(crate) fn run_pass(
    cluster: &mut Cluster,
    problem: &QcqpProblem,
    kind: PassKind,
    z: &[f64],
    weights: &[f64],
    eq_mult: &[f64],
) -> Result<Pass> {
    let m1 = problem.n_quad;
    let m2 = problem.n_eq;
    if weights.len() != m1 {
        return Err(Error::dim("inequality multipliers", m1, weights.len()));
    }
    if eq_mult.len() != m2 {
        return Err(Error::dim("equality multipliers", m2, eq_mult.len()));
    }
    let mats: Vec<_> = problem.quad.iter().collect();
    let prods = cluster.matvec_many(&mats, z)?;

    let predictor = kind == PassKind::Predictor;
    let first = if predictor { 0 } else { 1 };
    let n_quad_terms = m1 + 1 - first;
    let n_scalars = n_quad_terms + m2 + if predictor { 3 } else { 0 };

    let worker_out = cluster.map_workers(|_, cols| {
        let mut scalars = vec![0.0; n_scalars];
        let mut grad = Vec::with_capacity(cols.len());
        let (quad_part, rest) = scalars.split_at_mut(n_quad_terms);
        let (eq_part, norm_part) = rest.split_at_mut(m2);
        for j in cols {
            let zj = z[j];
            let mut g = prods[0][j] + problem.lin_x[0][j];
            for (i, &w) in weights.iter().enumerate() {
                g += w * (prods[i + 1][j] + problem.lin_x[i + 1][j]);
            }
            g += problem.eq_x.column_dot(j, eq_mult);
            grad.push(g);

            if zj != 0.0 {
                for (slot, i) in quad_part.iter_mut().zip(first..=m1) {
                    *slot += zj * (0.5 * prods[i][j] + problem.lin_x[i][j]);
                }
                problem.eq_x.axpy_column(j, zj, eq_part);
            }
            if predictor {
                let c = clip_gradient(zj, problem.x_upper[j], g);
                norm_part[0] += zj * zj;
                norm_part[1] += g * g;
                norm_part[2] += c * c;
            }
        }
        (scalars, grad)
    });

    let (parts, slices): (Vec<_>, Vec<_>) = worker_out.into_iter().unzip();
    let grad = cluster.concat(slices);
    let scalars = cluster.reduce(parts);

    let mut quad = Vec::with_capacity(m1 + 1);
    if !predictor {
        quad.push(f64::NAN);
    }
    quad.extend_from_slice(&scalars[..n_quad_terms]);
    let eq = scalars[n_quad_terms..n_quad_terms + m2].to_vec();
    let (point_norm_sq, grad_norm_sq, clipped_sq) = if predictor {
        let t = &scalars[n_quad_terms + m2..];
        (t[0], t[1], t[2])
    } else {
        (f64::NAN, f64::NAN, f64::NAN)
    };
    Ok(Pass {
        quad,
        eq,
        grad,
        point_norm_sq,
        grad_norm_sq,
        clipped_sq,
    })
}

/// `z_j - rho * grad_j` projected into the box, on each worker's slice.
pub(crate) fn projected_step(
    cluster: &Cluster,
    problem: &QcqpProblem,
    anchor: &[f64],
    grad: &[f64],
    rho: f64,
) -> Vec<f64> {
    let slices = cluster.map_workers(|_, cols| {
        cols.map(|j| problem.project(j, anchor[j] - rho * grad[j]))
            .collect::<Vec<f64>>()
    });
    cluster.concat(slices)
}

/// `anchor - rho * grad` for the free block.
pub(crate) fn free_step(anchor: &[f64], grad: &[f64], rho: f64) -> Vec<f64> {
    anchor.iter().zip(grad).map(|(a, g)| a - rho * g).collect()
}

/// `max(0, mult + rho * value)` element-wise.
pub(crate) fn inequality_step(mult: &[f64], values: &[f64], rho: f64) -> Vec<f64> {
    mult.iter()
        .zip(values)
        .map(|(m, g)| (m + rho * g).max(0.0))
        .collect()
}

/// `mult + rho * residual` element-wise.
pub(crate) fn equality_step(mult: &[f64], residual: &[f64], rho: f64) -> Vec<f64> {
    mult.iter().zip(residual).map(|(m, h)| m + rho * h).collect()
}
