use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{project_box, QcqpProblem};

/// Primal and dual iterates plus the predictors of the current iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterateState {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
    pub gamma: Vec<f64>,
    /// Predictor of `x`.
    pub y: Vec<f64>,
    /// Predictor of `u`.
    pub v: Vec<f64>,
    /// Predictor of `lambda`.
    pub mu: Vec<f64>,
    /// Predictor of `gamma`.
    pub nu: Vec<f64>,
    pub k: usize,
}

/// Optional starting point; missing blocks default to zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StartPoint {
    pub x: Option<Vec<f64>>,
    pub u: Option<Vec<f64>>,
    pub lambda: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
}

impl IterateState {
    pub fn zeros(problem: &QcqpProblem) -> Self {
        IterateState {
            x: vec![0.0; problem.n_x],
            u: vec![0.0; problem.n_u],
            lambda: vec![0.0; problem.n_quad],
            gamma: vec![0.0; problem.n_eq],
            y: vec![0.0; problem.n_x],
            v: vec![0.0; problem.n_u],
            mu: vec![0.0; problem.n_quad],
            nu: vec![0.0; problem.n_eq],
            k: 0,
        }
    }

    /// Builds the initial state, projecting `x` into the box and `lambda`
    /// onto the nonnegative orthant.
    pub fn from_start(problem: &QcqpProblem, start: &StartPoint) -> Result<Self> {
        let mut st = IterateState::zeros(problem);
        let take = |field: &str, src: &Option<Vec<f64>>, dst: &mut Vec<f64>| -> Result<()> {
            if let Some(v) = src {
                if v.len() != dst.len() {
                    return Err(Error::dim(field, dst.len(), v.len()));
                }
                if v.iter().any(|e| !e.is_finite()) {
                    return Err(Error::Invalid(format!("start {field} is not finite")));
                }
                dst.copy_from_slice(v);
            }
            Ok(())
        };
        take("x", &start.x, &mut st.x)?;
        take("u", &start.u, &mut st.u)?;
        take("lambda", &start.lambda, &mut st.lambda)?;
        take("gamma", &start.gamma, &mut st.gamma)?;
        for (xj, &ub) in st.x.iter_mut().zip(&problem.x_upper) {
            *xj = project_box(*xj, ub);
        }
        for l in st.lambda.iter_mut() {
            *l = l.max(0.0);
        }
        st.y.clone_from(&st.x);
        st.v.clone_from(&st.u);
        st.mu.clone_from(&st.lambda);
        st.nu.clone_from(&st.gamma);
        Ok(st)
    }

    pub fn is_finite(&self) -> bool {
        [&self.x, &self.u, &self.lambda, &self.gamma]
            .iter()
            .all(|v| v.iter().all(|e| e.is_finite()))
    }

    /// `||z - other||^2` over `z = (x, u, lambda, gamma)`.
    pub fn distance_sq(&self, other: &IterateState) -> f64 {
        let sq = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum() };
        sq(&self.x, &other.x)
            + sq(&self.u, &other.u)
            + sq(&self.lambda, &other.lambda)
            + sq(&self.gamma, &other.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ColumnMatrix;

    #[test]
    fn start_is_projected() {
        let mut p = QcqpProblem::new(ColumnMatrix::identity(2), vec![0.0; 2], 0.0)
            .unwrap()
            .with_upper(vec![1.0, f64::INFINITY]);
        p.push_quad(ColumnMatrix::identity(2), vec![0.0; 2], vec![], -1.0);
        let st = IterateState::from_start(
            &p,
            &StartPoint {
                x: Some(vec![3.0, -2.0]),
                lambda: Some(vec![-1.0]),
                ..StartPoint::default()
            },
        )
        .unwrap();
        assert_eq!(st.x, vec![1.0, 0.0]);
        assert_eq!(st.lambda, vec![0.0]);
        assert!(IterateState::from_start(
            &p,
            &StartPoint {
                x: Some(vec![1.0]),
                ..StartPoint::default()
            }
        )
        .is_err());
    }
}
