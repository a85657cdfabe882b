//! Soft-margin SVM with learned kernel combination, written as a QCQP.
//!
//! With `alpha` as `x` and the epigraph variable `t` as the single free
//! coordinate `u`, the instance reads
//!
//! ```text
//! minimize    1/2 alpha' P0 alpha - 1'alpha + R t
//! subject to  1/2 alpha' (G_i / R_i) alpha - t <= 0,   one per kernel
//!             l'alpha = 0
//! ```
//!
//! where `G_i = L K_i L` over the training points and `L = diag(labels)`.
//! The 1-norm margin uses `P0 = 0` with `alpha` in `[0, C]`; the 2-norm
//! margin uses `P0 = I / C` with `alpha >= 0`. At a solution the inequality
//! multipliers sum to `R` and act as the kernel weights.

use std::path::PathBuf;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::data::{gen_twonorm, load_csv, twonorm_offset, Dataset, TWONORM_DIM};
use super::kernel::{gram_matrix, Kernel};
use super::{stream_rng, STREAM_SPLIT};
use crate::error::{Error, Result};
use crate::matrix::ColumnMatrix;
use crate::model::QcqpProblem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DatasetSource {
    /// Two Gaussian classes with means `(a, .., a)` and `(-a, .., -a)`.
    TwoNorm {
        dim: usize,
        offset: f64,
    },
    Csv {
        path: PathBuf,
    },
}

impl DatasetSource {
    pub fn twonorm() -> Self {
        DatasetSource::TwoNorm {
            dim: TWONORM_DIM,
            offset: twonorm_offset(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SvmKind {
    /// Hinge loss: box `[0, C]`, no quadratic objective term.
    Sm1,
    /// Squared hinge loss: `alpha >= 0` with `P0 = I / C`.
    Sm2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MklSpec {
    pub dataset: DatasetSource,
    pub n_tr: usize,
    pub n_t: usize,
    pub kernels: Vec<Kernel>,
    pub svm: SvmKind,
    pub margin_c: f64,
    /// Budget on the kernel weights, `sum_i lambda_i = R`.
    pub trace_budget: f64,
    /// Trace each kernel matrix is scaled to; one entry per kernel.
    pub kernel_traces: Vec<f64>,
    pub seed: u64,
}

/// Gaussian widths of the standard five-kernel family.
pub const STANDARD_WIDTHS: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

impl MklSpec {
    /// Two-norm data with five Gaussian kernels, `R = 5` and unit traces.
    pub fn twonorm(n_tr: usize, n_t: usize, svm: SvmKind, margin_c: f64, seed: u64) -> Self {
        let kernels: Vec<Kernel> = STANDARD_WIDTHS
            .iter()
            .map(|&sigma_sq| Kernel::Gaussian { sigma_sq })
            .collect();
        MklSpec {
            dataset: DatasetSource::twonorm(),
            n_tr,
            n_t,
            kernel_traces: vec![1.0; kernels.len()],
            trace_budget: kernels.len() as f64,
            kernels,
            svm,
            margin_c,
            seed,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.n_tr < 2 {
            return Err(Error::Spec(format!("n_tr must be at least 2, got {}", self.n_tr)));
        }
        if self.kernels.is_empty() {
            return Err(Error::Spec("at least one kernel is required".into()));
        }
        for k in &self.kernels {
            k.check()?;
        }
        if self.kernel_traces.len() != self.kernels.len() {
            return Err(Error::dim(
                "kernel_traces",
                self.kernels.len(),
                self.kernel_traces.len(),
            ));
        }
        if self.kernel_traces.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::Spec("kernel traces must be positive".into()));
        }
        if !(self.margin_c > 0.0 && self.margin_c.is_finite()) {
            return Err(Error::Spec(format!("C must be > 0, got {}", self.margin_c)));
        }
        if !(self.trace_budget > 0.0 && self.trace_budget.is_finite()) {
            return Err(Error::Spec(format!("R must be > 0, got {}", self.trace_budget)));
        }
        Ok(())
    }
}

/// Everything needed to evaluate a learned classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MklMetadata {
    pub spec: MklSpec,
    pub train: Dataset,
    pub test: Dataset,
    /// Factor applied to each raw kernel so its Gram matrix over train and
    /// test points together has the requested trace.
    pub kernel_scales: Vec<f64>,
}

impl MklMetadata {
    /// Normalized kernel `i` between two points.
    pub fn kernel(&self, i: usize, a: &[f64], b: &[f64]) -> f64 {
        self.kernel_scales[i] * super::kernel::kernel_eval(&self.spec.kernels[i], a, b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MklInstance {
    pub problem: QcqpProblem,
    pub metadata: MklMetadata,
}

fn load_points(spec: &MklSpec) -> Result<Dataset> {
    match &spec.dataset {
        DatasetSource::TwoNorm { dim, offset } => {
            let total = spec.n_tr + spec.n_t;
            gen_twonorm(total + total % 2, *dim, *offset, spec.seed)
        }
        DatasetSource::Csv { path } => load_csv(path),
    }
}

pub fn build_mkl_qcqp(spec: &MklSpec) -> Result<MklInstance> {
    spec.check()?;
    let all = load_points(spec)?;
    if all.len() < spec.n_tr + spec.n_t {
        return Err(Error::Spec(format!(
            "data set has {} points, {} requested",
            all.len(),
            spec.n_tr + spec.n_t
        )));
    }
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.shuffle(&mut stream_rng(spec.seed, STREAM_SPLIT));
    let train = all.subset(&order[..spec.n_tr]);
    let test = all.subset(&order[spec.n_tr..spec.n_tr + spec.n_t]);
    if !train.has_both_classes() {
        return Err(Error::Spec("training labels contain a single class".into()));
    }

    let n = spec.n_tr;
    let mut union = train.features.clone();
    union.extend(test.features.iter().cloned());

    let mut kernel_scales = Vec::with_capacity(spec.kernels.len());
    let mut hessians = Vec::with_capacity(spec.kernels.len());
    for (kernel, &target) in spec.kernels.iter().zip(&spec.kernel_traces) {
        let full = gram_matrix(kernel, &union);
        let trace: f64 = (0..union.len()).map(|j| full.get(j, j)).sum();
        if !(trace > 0.0) {
            return Err(Error::Spec(format!(
                "kernel {kernel:?} has zero trace on the data"
            )));
        }
        let scale = target / trace;
        kernel_scales.push(scale);
        // G / R_i with G = L K_tr L
        let factor = scale / target;
        let mut data = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                data[j * n + i] = factor * train.labels[i] * train.labels[j] * full.get(i, j);
            }
        }
        hessians.push(ColumnMatrix::from_col_major(n, n, data)?);
    }

    let (p0, upper) = match spec.svm {
        SvmKind::Sm1 => (ColumnMatrix::zeros(n, n), vec![spec.margin_c; n]),
        SvmKind::Sm2 => (
            ColumnMatrix::diagonal(&vec![1.0 / spec.margin_c; n]),
            vec![f64::INFINITY; n],
        ),
    };
    let mut problem = QcqpProblem::new(p0, vec![-1.0; n], 0.0)?
        .with_upper(upper)
        .with_free_block(1, vec![spec.trace_budget]);
    for g in hessians {
        problem.push_quad(g, vec![0.0; n], vec![-1.0], 0.0);
    }
    problem.set_equalities(
        ColumnMatrix::from_rows(std::slice::from_ref(&train.labels), n)?,
        ColumnMatrix::zeros(1, 1),
        vec![0.0],
    );

    Ok(MklInstance {
        problem,
        metadata: MklMetadata {
            spec: spec.clone(),
            train,
            test,
            kernel_scales,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    #[test]
    fn label_flip_on_off_diagonal() {
        // two points, linear kernel: K = [[a, b], [b, c]]
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        std::fs::write(&path, "1,1.0,0.0\n-1,0.5,2.0\n").unwrap();
        let spec = MklSpec {
            dataset: DatasetSource::Csv { path },
            n_tr: 2,
            n_t: 0,
            kernels: vec![Kernel::Linear],
            svm: SvmKind::Sm2,
            margin_c: 1.0,
            trace_budget: 1.0,
            kernel_traces: vec![1.0],
            seed: 0,
        };
        let inst = build_mkl_qcqp(&spec).unwrap();
        let g = &inst.problem.quad[1];
        let k = |a: &[f64], b: &[f64]| inst.metadata.kernel(0, a, b);
        let tr = &inst.metadata.train;
        let l = &tr.labels;
        assert!((g.get(0, 1) - l[0] * l[1] * k(&tr.features[0], &tr.features[1])).abs() < 1e-15);
        assert!(g.get(0, 1) < 0.0);
        assert_eq!(g.get(0, 0), k(&tr.features[0], &tr.features[0]));
        // SM2 with C = 1 gives the identity
        assert_eq!(
            inst.problem.quad[0].to_rows(),
            vec![vec![1.0, 0.0], vec![0.0, 1.0]]
        );
        assert!(validate(&inst.problem).is_valid());
    }

    #[test]
    fn twonorm_instance_shape() {
        let spec = MklSpec::twonorm(20, 6, SvmKind::Sm1, 1.0, 3);
        assert_eq!(spec.trace_budget, 5.0);
        assert_eq!(spec.kernel_traces, vec![1.0; 5]);
        let inst = build_mkl_qcqp(&spec).unwrap();
        let p = &inst.problem;
        assert_eq!((p.n_x, p.n_u, p.n_quad, p.n_eq), (20, 1, 5, 1));
        assert_eq!(p.x_upper, vec![1.0; 20]);
        assert!(validate(p).is_valid());
        assert_eq!(inst.metadata.test.len(), 6);
        assert_eq!(inst, build_mkl_qcqp(&spec).unwrap());
    }

    #[test]
    fn single_class_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        std::fs::write(&path, "1,1.0\n1,0.5\n").unwrap();
        let mut spec = MklSpec::twonorm(2, 0, SvmKind::Sm2, 1.0, 0);
        spec.dataset = DatasetSource::Csv { path };
        assert!(build_mkl_qcqp(&spec).is_err());
    }
}
