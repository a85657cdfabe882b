//! Random convex QCQPs with prescribed Hessian condition numbers, plus the
//! infeasible and unbounded constructions.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{hessian_stream, stream_rng, vector_stream};
use crate::error::{Error, Result};
use crate::matrix::ColumnMatrix;
use crate::model::QcqpProblem;

/// `(condition number, d_min, d_max)` for the four standard difficulty
/// levels.
pub const EIGEN_RANGE_PRESETS: [(f64, f64, f64); 4] = [
    (1.25, 4.0, 5.0),
    (1e2, 0.1, 10.0),
    (1e4, 0.003, 30.0),
    (1e6, 0.00002, 20.0),
];

/// The standard eigenvalue range for `kappa`, if it is one of the listed
/// levels.
pub fn eigen_range_for_condition(kappa: f64) -> Option<(f64, f64)> {
    EIGEN_RANGE_PRESETS
        .iter()
        .find(|(k, _, _)| (k - kappa).abs() <= 1e-12 * kappa)
        .map(|&(_, lo, hi)| (lo, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomQcqpSpec {
    pub n1: usize,
    pub m1: usize,
    pub kappa: f64,
    pub d_min: f64,
    pub d_max: f64,
    pub q_range: (f64, f64),
    pub r_range: (f64, f64),
    pub seed: u64,
    /// Common upper bound on every `x_j`; `None` leaves `x` unbounded above.
    pub x_upper: Option<f64>,
}

impl RandomQcqpSpec {
    /// Uses the standard eigenvalue range for `kappa` when it is a listed
    /// level and `[1, kappa]` otherwise.
    pub fn with_condition(n1: usize, m1: usize, kappa: f64, seed: u64) -> Self {
        let (d_min, d_max) = eigen_range_for_condition(kappa).unwrap_or((1.0, kappa));
        RandomQcqpSpec {
            n1,
            m1,
            kappa,
            d_min,
            d_max,
            q_range: (-1.0, 1.0),
            r_range: (-1.0, 0.0),
            seed,
            x_upper: None,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.n1 == 0 {
            return Err(Error::Spec("n1 must be at least 1".into()));
        }
        if !(self.d_min > 0.0 && self.d_max >= self.d_min && self.d_max.is_finite()) {
            return Err(Error::Spec(format!(
                "need 0 < d_min <= d_max, got d_min = {}, d_max = {}",
                self.d_min, self.d_max
            )));
        }
        let ratio = self.d_max / self.d_min;
        if (ratio - self.kappa).abs() > 1e-12 * self.kappa {
            return Err(Error::Spec(format!(
                "kappa = {} does not match d_max / d_min = {ratio}",
                self.kappa
            )));
        }
        for (name, (lo, hi)) in [("q_range", self.q_range), ("r_range", self.r_range)] {
            if !(lo <= hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::Spec(format!("{name} = ({lo}, {hi}) is not an interval")));
            }
        }
        if self.r_range.1 > 0.0 {
            return Err(Error::Spec(
                "r_range must lie in (-inf, 0] so that x = 0 is feasible".into(),
            ));
        }
        if let Some(ub) = self.x_upper {
            if !(ub > 0.0) {
                return Err(Error::Spec(format!("x_upper must be > 0, got {ub}")));
            }
        }
        Ok(())
    }
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// columns of Q flipped so that diag(R) is positive.
fn haar_orthogonal(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `Q' D Q` with `D = diag(d_max, d_min, uniform...)`, symmetrized.
pub(crate) fn random_psd(n: usize, d_min: f64, d_max: f64, rng: &mut impl Rng) -> ColumnMatrix {
    let q = haar_orthogonal(n, rng);
    let diag: Vec<f64> = (0..n)
        .map(|j| match j {
            0 => d_max,
            1 => d_min,
            _ => rng.random_range(d_min..=d_max),
        })
        .collect();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    let p = q.transpose() * d * &q;
    let sym = (&p + p.transpose()) * 0.5;
    ColumnMatrix::from_col_major(n, n, sym.as_slice().to_vec()).unwrap_or_else(|_| ColumnMatrix::zeros(n, n))
}

fn uniform_vec(n: usize, range: (f64, f64), rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| uniform(range, rng)).collect()
}

fn uniform(range: (f64, f64), rng: &mut impl Rng) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.random_range(range.0..=range.1)
    }
}

/// Hessian, linear term and constant of quadratic `index`.
fn random_quadratic(spec: &RandomQcqpSpec, index: usize) -> (ColumnMatrix, Vec<f64>, f64) {
    let mut rng = stream_rng(spec.seed, hessian_stream(index));
    let p = random_psd(spec.n1, spec.d_min, spec.d_max, &mut rng);
    let mut rng = stream_rng(spec.seed, vector_stream(index));
    let q = uniform_vec(spec.n1, spec.q_range, &mut rng);
    let r = uniform(spec.r_range, &mut rng);
    (p, q, r)
}

pub fn gen_random_qcqp(spec: &RandomQcqpSpec) -> Result<QcqpProblem> {
    spec.check()?;
    let (p0, q0, r0) = random_quadratic(spec, 0);
    let mut problem = QcqpProblem::new(p0, q0, r0)?;
    for i in 1..=spec.m1 {
        let (p, q, r) = random_quadratic(spec, i);
        problem.push_quad(p, q, Vec::new(), r);
    }
    if let Some(ub) = spec.x_upper {
        problem = problem.with_upper(vec![ub; spec.n1]);
    }
    let at_zero = problem.constraint_values(&vec![0.0; spec.n1], &[]);
    if let Some(i) = at_zero.iter().position(|&g| g > 0.0) {
        return Err(Error::Spec(format!(
            "constraint {} is violated at x = 0 (value {})",
            i + 1,
            at_zero[i]
        )));
    }
    Ok(problem)
}

/// Offset that keeps the second constraint at least this far above zero.
pub const INFEASIBLE_GAP: f64 = 100.0;

/// A random one-constraint problem plus a second constraint
/// `1/2 ||x + q||^2 + r + 1 + 100 <= 0` with `r` in `[-1, 0]`, which is at
/// least 100 everywhere.
pub fn gen_infeasible(n1: usize, seed: u64) -> Result<QcqpProblem> {
    if n1 == 0 {
        return Err(Error::Spec("n1 must be at least 1".into()));
    }
    let spec = RandomQcqpSpec::with_condition(n1, 1, 1.25, seed);
    let mut problem = gen_random_qcqp(&spec)?;
    let mut rng = stream_rng(seed, vector_stream(2));
    let q = uniform_vec(n1, spec.q_range, &mut rng);
    let r = uniform(spec.r_range, &mut rng);
    // 1/2 ||x + q||^2 = 1/2 x'x + q'x + 1/2 q'q
    let constant = 0.5 * q.iter().map(|v| v * v).sum::<f64>() + r + 1.0 + INFEASIBLE_GAP;
    problem.push_quad(ColumnMatrix::identity(n1), q, Vec::new(), constant);
    Ok(problem)
}

/// A problem whose objective decreases without bound along a direction the
/// constraint ignores.
///
/// The direction is carried by a one-dimensional free block `u` with
/// objective coefficient 1 and no other appearance; `x` has `n1 - 1`
/// coordinates, objective `1/2 x'x` and one constraint
/// `1/2 x'x + 1'x + r <= 0`.
pub fn gen_unbounded(n1: usize, seed: u64) -> Result<QcqpProblem> {
    if n1 < 2 {
        return Err(Error::Spec("n1 must be at least 2".into()));
    }
    let n = n1 - 1;
    let mut rng0 = stream_rng(seed, vector_stream(0));
    let r0 = uniform((-1.0, 0.0), &mut rng0);
    let mut rng1 = stream_rng(seed, vector_stream(1));
    let r1 = uniform((-1.0, 0.0), &mut rng1);

    let mut problem =
        QcqpProblem::new(ColumnMatrix::identity(n), vec![0.0; n], r0)?.with_free_block(1, vec![1.0]);
    problem.push_quad(ColumnMatrix::identity(n), vec![1.0; n], vec![0.0], r1);
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    #[test]
    fn table_ranges_round_trip() {
        for &(k, lo, hi) in &EIGEN_RANGE_PRESETS {
            let spec = RandomQcqpSpec::with_condition(4, 1, k, 0);
            assert_eq!((spec.d_min, spec.d_max), (lo, hi));
            assert!(spec.check().is_ok(), "kappa {k}");
        }
        assert_eq!(eigen_range_for_condition(1e2), Some((0.1, 10.0)));
        assert_eq!(eigen_range_for_condition(3.0), None);
    }

    #[test]
    fn deterministic_and_valid() {
        let spec = RandomQcqpSpec::with_condition(8, 2, 1.25, 3);
        let a = gen_random_qcqp(&spec).unwrap();
        let b = gen_random_qcqp(&spec).unwrap();
        assert_eq!(a, b);
        assert!(validate(&a).is_valid());
        let c = gen_random_qcqp(&RandomQcqpSpec { seed: 4, ..spec }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn bad_spec_rejected() {
        let mut spec = RandomQcqpSpec::with_condition(4, 1, 1.25, 0);
        spec.kappa = 2.0;
        assert!(gen_random_qcqp(&spec).is_err());
        let mut spec = RandomQcqpSpec::with_condition(4, 1, 1.25, 0);
        spec.r_range = (0.0, 1.0);
        assert!(gen_random_qcqp(&spec).is_err());
    }

    #[test]
    fn infeasible_constraint_stays_above_gap() {
        let p = gen_infeasible(6, 1).unwrap();
        assert!(validate(&p).is_valid());
        for x in [vec![0.0; 6], vec![1.0; 6], vec![0.3, 2.0, 0.0, 5.0, 0.1, 0.7]] {
            assert!(p.constraint_values(&x, &[])[1] >= INFEASIBLE_GAP);
        }
    }

    #[test]
    fn unbounded_direction() {
        let p = gen_unbounded(5, 2).unwrap();
        assert!(validate(&p).is_valid());
        let x = vec![0.2; 4];
        let f0 = p.objective(&x, &[0.0]);
        let g0 = p.constraint_values(&x, &[0.0]);
        for t in [1.0, 10.0, 1e3] {
            assert_eq!(p.objective(&x, &[-t]), f0 - t);
            assert_eq!(p.constraint_values(&x, &[-t]), g0);
        }
    }
}
