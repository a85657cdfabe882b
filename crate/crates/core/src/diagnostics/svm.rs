//! Classifier evaluation for solved kernel-learning instances.

use crate::error::{Error, Result};
use crate::generators::{MklMetadata, SvmKind};

/// Coefficients below this fraction of the largest one do not count as
/// support vectors.
const SUPPORT_REL_TOL: f64 = 1e-6;

/// `sum_j alpha_j l_j sum_i (lambda_i / R_i) k_i(d_j, point)`.
fn score_without_bias(alpha: &[f64], lambda: &[f64], meta: &MklMetadata, point: &[f64]) -> f64 {
    let train = &meta.train;
    let mut total = 0.0;
    for (j, (&a, xj)) in alpha.iter().zip(&train.features).enumerate() {
        if a == 0.0 {
            continue;
        }
        let mut k = 0.0;
        for (i, &w) in lambda.iter().enumerate() {
            if w != 0.0 {
                k += w / meta.spec.kernel_traces[i] * meta.kernel(i, xj, point);
            }
        }
        total += a * train.labels[j] * k;
    }
    total
}

/// Offset of the decision function, averaged over margin support vectors.
///
/// For the 1-norm margin these are the points with `0 < alpha_j < C`, for
/// which `l_j f(d_j) = 1`; when there are none, every point with
/// `alpha_j > 0` is used. For the 2-norm margin every point with
/// `alpha_j > 0` satisfies `l_j f(d_j) = 1 - alpha_j / C`.
pub fn recover_bias(alpha: &[f64], lambda: &[f64], meta: &MklMetadata) -> f64 {
    let c = meta.spec.margin_c;
    let scale = alpha.iter().fold(0.0f64, |m, &a| m.max(a));
    let thr = SUPPORT_REL_TOL * scale;
    let train = &meta.train;
    let target = |j: usize| -> f64 {
        match meta.spec.svm {
            SvmKind::Sm1 => train.labels[j],
            SvmKind::Sm2 => train.labels[j] * (1.0 - alpha[j] / c),
        }
    };
    let positive: Vec<usize> = (0..alpha.len()).filter(|&j| alpha[j] > thr).collect();
    let support: Vec<usize> = match meta.spec.svm {
        SvmKind::Sm1 => {
            let inner: Vec<usize> = positive
                .iter()
                .copied()
                .filter(|&j| alpha[j] < c - SUPPORT_REL_TOL * c)
                .collect();
            if inner.is_empty() {
                positive
            } else {
                inner
            }
        }
        SvmKind::Sm2 => positive,
    };
    if support.is_empty() {
        return 0.0;
    }
    let sum: f64 = support
        .iter()
        .map(|&j| target(j) - score_without_bias(alpha, lambda, meta, &train.features[j]))
        .sum();
    sum / support.len() as f64
}

/// Fraction of test points whose label matches the sign of the decision
/// function (a zero score counts as `+1`).
pub fn test_set_accuracy(alpha: &[f64], lambda: &[f64], meta: &MklMetadata) -> Result<f64> {
    if alpha.len() != meta.train.len() {
        return Err(Error::dim("alpha", meta.train.len(), alpha.len()));
    }
    if lambda.len() != meta.spec.kernels.len() {
        return Err(Error::dim(
            "kernel weights",
            meta.spec.kernels.len(),
            lambda.len(),
        ));
    }
    if meta.test.is_empty() {
        return Err(Error::Invalid("test set is empty".into()));
    }
    let b = recover_bias(alpha, lambda, meta);
    let correct = meta
        .test
        .features
        .iter()
        .zip(&meta.test.labels)
        .filter(|(d, &l)| {
            let s = score_without_bias(alpha, lambda, meta, d) + b;
            let predicted = if s >= 0.0 { 1.0 } else { -1.0 };
            predicted == l
        })
        .count();
    Ok(correct as f64 / meta.test.len() as f64)
}
