//! Adaptive step size.
//!
//! The step `rho` is the minimum of eight components. Components 1, 4, 6, 7
//! and 8 depend only on the problem norms; components 2, 3 and 5 depend on
//! the current iterate. Each component scales with its share `eps_s` of the
//! budget `1 - eps0`; the shares follow per-component weights which shrink by
//! `rho / rho_s` after every step, so components that keep losing the min
//! hand budget to the one that binds.

use serde::{Deserialize, Serialize};

use crate::model::ProblemNorms;

pub const N_COMPONENTS: usize = 8;

/// Weights never drop below this after an update, which keeps every
/// `eps_s > 0`.
pub const WEIGHT_FLOOR: f64 = 1e-12;

pub const DEFAULT_BIG_M: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// Shares follow the learned weights.
    #[default]
    Adaptive,
    /// Every share is fixed at `(1 - eps0) / 8`.
    Equal,
}

/// Iterate-dependent inputs of the step rule, all evaluated at the k-th
/// iterate.
#[derive(Debug, Clone, Copy)]
pub struct StepInputs<'a> {
    /// `1/2 x'P_i x + q_i'x + c_i'u + r_i` for `i = 1..m1`.
    pub constraint_values: &'a [f64],
    pub lambda: &'a [f64],
    /// `||P_0 x + q_0 + sum_i lambda_i (P_i x + q_i) + A' gamma||_2`
    pub grad_norm: f64,
    /// `||x||_2`
    pub x_norm: f64,
}

/// Positive root of `a t^2 + b t - c = 0` for `a, b >= 0`, `c > 0`.
///
/// Returns `None` when `a = b = 0` (no root). The `a > 0` branch uses the
/// rationalized form `2c / (b + sqrt(b^2 + 4ac))`, which equals
/// `(-b + sqrt(b^2 + 4ac)) / 2a` without the cancellation.
pub fn positive_root(a: f64, b: f64, c: f64) -> Option<f64> {
    if a > 0.0 {
        Some(2.0 * c / (b + (b * b + 4.0 * a * c).sqrt()))
    } else if b > 0.0 {
        Some(c / b)
    } else {
        None
    }
}

/// `eps / norm`, or `eps` when the norm is zero.
fn ratio_or_eps(eps: f64, norm: f64) -> f64 {
    if norm != 0.0 {
        eps / norm
    } else {
        eps
    }
}

/// Evaluates all eight components for the given shares.
pub fn step_components(
    norms: &ProblemNorms,
    eps: &[f64; N_COMPONENTS],
    inputs: &StepInputs<'_>,
    big_m: f64,
) -> [f64; N_COMPONENTS] {
    let m1 = norms.constraint_quad.len();

    let rho1 = ratio_or_eps(eps[0], norms.objective_quad);

    let rho2 = (0..m1)
        .map(|i| {
            let a = inputs.constraint_values[i].abs();
            let b = inputs.lambda[i];
            let c = ratio_or_eps(eps[1], norms.constraint_quad[i]) / m1 as f64;
            positive_root(a, b, c).unwrap_or(big_m)
        })
        .fold(big_m, f64::min);

    let cap = 2.0 * eps[2];
    let rho3 = if norms.stacked_quad == 0.0 {
        cap
    } else {
        let c = 2.0 * eps[2] / norms.stacked_quad;
        match positive_root(inputs.grad_norm, 2.0 * inputs.x_norm, c) {
            Some(r) => r.min(cap),
            None => cap,
        }
    };

    let rho4 = ratio_or_eps(eps[3], norms.stacked_lin_x);

    let rho5 = if inputs.x_norm != 0.0 && norms.stacked_quad != 0.0 {
        eps[4] / (inputs.x_norm * norms.stacked_quad)
    } else {
        eps[4]
    };

    let rho6 = ratio_or_eps(eps[5], norms.stacked_lin_u);
    let rho7 = ratio_or_eps(eps[6], norms.eq_x);
    let rho8 = ratio_or_eps(eps[7], norms.eq_u);

    [rho1, rho2, rho3, rho4, rho5, rho6, rho7, rho8]
}

/// `eps_s = w_s / sum(w) * (1 - eps0)`.
pub fn update_epsilons(weights: &[f64; N_COMPONENTS], eps0: f64) -> [f64; N_COMPONENTS] {
    let total: f64 = weights.iter().sum();
    let budget = 1.0 - eps0;
    weights.map(|w| w / total * budget)
}

/// `w_s <- (rho / rho_s) w_s`, floored at [`WEIGHT_FLOOR`]. A component that
/// is not finite and positive contributes a zero ratio and lands on the
/// floor.
pub fn update_weights(
    rho: f64,
    components: &[f64; N_COMPONENTS],
    weights: &[f64; N_COMPONENTS],
) -> [f64; N_COMPONENTS] {
    let mut out = [0.0; N_COMPONENTS];
    for s in 0..N_COMPONENTS {
        let rs = components[s];
        let ratio = if rs.is_finite() && rs > 0.0 { rho / rs } else { 0.0 };
        out[s] = (ratio * weights[s]).max(WEIGHT_FLOOR);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepSizeState {
    pub eps0: f64,
    pub weights: [f64; N_COMPONENTS],
    pub epsilons: [f64; N_COMPONENTS],
    pub components: [f64; N_COMPONENTS],
    pub rho: f64,
    pub big_m: f64,
    pub mode: WeightMode,
}

impl StepSizeState {
    pub fn new(eps0: f64, big_m: f64, mode: WeightMode) -> Self {
        let weights = [1.0; N_COMPONENTS];
        StepSizeState {
            eps0,
            weights,
            epsilons: update_epsilons(&weights, eps0),
            components: [f64::NAN; N_COMPONENTS],
            rho: f64::NAN,
            big_m,
            mode,
        }
    }

    /// Refreshes the shares, evaluates the components and takes their min.
    pub fn compute(&mut self, norms: &ProblemNorms, inputs: &StepInputs<'_>) -> f64 {
        self.epsilons = match self.mode {
            WeightMode::Adaptive => update_epsilons(&self.weights, self.eps0),
            WeightMode::Equal => [(1.0 - self.eps0) / N_COMPONENTS as f64; N_COMPONENTS],
        };
        self.components = step_components(norms, &self.epsilons, inputs, self.big_m);
        self.rho = self.components.iter().copied().fold(f64::INFINITY, f64::min);
        self.rho
    }

    /// Weight update after a step; a no-op for equal weights.
    pub fn learn(&mut self) {
        if self.mode == WeightMode::Adaptive {
            self.weights = update_weights(self.rho, &self.components, &self.weights);
        }
    }
}
