use std::fmt;

use super::QcqpProblem;
use crate::matrix::ColumnMatrix;

/// Relative tolerance on `max |P_ij - P_ji|` against `||P||_F`.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest accepted eigenvalue is `-PSD_TOL * ||P||_F`.
pub const PSD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Dimension(String),
    NonFinite { field: String },
    Asymmetric { index: usize, max_diff: f64 },
    NotPsd { index: usize, min_eigenvalue: f64 },
    NonPositiveUpper { index: usize, value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimension(msg) => write!(f, "{msg}"),
            Violation::NonFinite { field } => write!(f, "{field} contains a non-finite value"),
            Violation::Asymmetric { index, max_diff } => {
                write!(
                    f,
                    "P[{index}] is not symmetric (max |P_ij - P_ji| = {max_diff:e})"
                )
            }
            Violation::NotPsd {
                index,
                min_eigenvalue,
            } => write!(
                f,
                "P[{index}] is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})"
            ),
            Violation::NonPositiveUpper { index, value } => {
                write!(f, "x_upper[{index}] = {value} must be > 0")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks well-formedness: consistent dimensions, finite data, symmetric PSD
/// Hessians and strictly positive upper bounds.
pub fn validate(problem: &QcqpProblem) -> ValidationReport {
    let mut violations = Vec::new();
    if let Err(e) = problem.check_dimensions() {
        violations.push(Violation::Dimension(e.to_string()));
        return ValidationReport { violations };
    }

    let vec_fields = problem
        .lin_x
        .iter()
        .enumerate()
        .map(|(i, v)| (format!("q[{i}]"), v.as_slice()))
        .chain(
            problem
                .lin_u
                .iter()
                .enumerate()
                .map(|(i, v)| (format!("c[{i}]"), v.as_slice())),
        )
        .chain([
            ("r".to_string(), problem.constant.as_slice()),
            ("b".to_string(), problem.eq_rhs.as_slice()),
        ]);
    for (field, values) in vec_fields {
        if values.iter().any(|v| !v.is_finite()) {
            violations.push(Violation::NonFinite { field });
        }
    }
    for (field, m) in [("A", &problem.eq_x), ("B", &problem.eq_u)] {
        if !m.is_finite() {
            violations.push(Violation::NonFinite {
                field: field.to_string(),
            });
        }
    }

    for (index, p) in problem.quad.iter().enumerate() {
        if !p.is_finite() {
            violations.push(Violation::NonFinite {
                field: format!("P[{index}]"),
            });
            continue;
        }
        let scale = p.frobenius();
        let max_diff = p.asymmetry().unwrap_or(f64::INFINITY);
        if max_diff > SYMMETRY_TOL * scale {
            violations.push(Violation::Asymmetric { index, max_diff });
            continue;
        }
        let min_eigenvalue = smallest_eigenvalue(p);
        if min_eigenvalue < -PSD_TOL * scale {
            violations.push(Violation::NotPsd {
                index,
                min_eigenvalue,
            });
        }
    }

    for (index, &value) in problem.x_upper.iter().enumerate() {
        if value.is_nan() || value <= 0.0 {
            violations.push(Violation::NonPositiveUpper { index, value });
        }
    }
    ValidationReport { violations }
}

/// Smallest eigenvalue of the symmetric part of `p`.
fn smallest_eigenvalue(p: &ColumnMatrix) -> f64 {
    if p.nrows() == 0 {
        return 0.0;
    }
    if p.frobenius_sq() == 0.0 {
        return 0.0;
    }
    let m = p.to_nalgebra();
    let sym = (&m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn base(p0: ColumnMatrix) -> QcqpProblem {
        let n = p0.nrows();
        QcqpProblem::new(p0, vec![0.0; n], 0.0).unwrap()
    }

    #[test]
    fn identity_is_valid() {
        assert!(validate(&base(ColumnMatrix::identity(2))).is_valid());
    }

    #[test]
    fn upper_triangular_is_asymmetric() {
        let p0 = ColumnMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]], 2).unwrap();
        let report = validate(&base(p0));
        assert!(matches!(
            report.violations.as_slice(),
            [Violation::Asymmetric { index: 0, .. }]
        ));
    }

    #[test]
    fn indefinite_constraint_rejected() {
        let mut p = base(ColumnMatrix::identity(2));
        p.push_quad(ColumnMatrix::diagonal(&[-1.0, 1.0]), vec![0.0; 2], vec![], -1.0);
        let report = validate(&p);
        match report.violations.as_slice() {
            [Violation::NotPsd {
                index: 1,
                min_eigenvalue,
            }] => assert!((min_eigenvalue + 1.0).abs() < 1e-12),
            other => panic!("unexpected report {other:?}"),
        }
    }

    #[test]
    fn nonpositive_upper_and_dimension_errors() {
        let p = base(ColumnMatrix::identity(2)).with_upper(vec![1.0, 0.0]);
        assert!(matches!(
            validate(&p).violations.as_slice(),
            [Violation::NonPositiveUpper { index: 1, .. }]
        ));

        let mut p = base(ColumnMatrix::identity(2));
        p.lin_x[0] = vec![0.0; 3];
        assert!(matches!(
            validate(&p).violations.as_slice(),
            [Violation::Dimension(_)]
        ));
    }

    proptest! {
        #[test]
        fn gram_matrices_pass_psd_check(
            n in 1usize..8,
            k in 1usize..8,
            entries in proptest::collection::vec(-3.0f64..3.0, 64),
        ) {
            // M is k x n, P = M'M
            let m = |i: usize, j: usize| entries[(i * n + j) % entries.len()];
            let mut rows = vec![vec![0.0; n]; n];
            for (a, row) in rows.iter_mut().enumerate() {
                for (b, cell) in row.iter_mut().enumerate() {
                    *cell = (0..k).map(|t| m(t, a) * m(t, b)).sum();
                }
            }
            let p0 = ColumnMatrix::from_rows(&rows, n).unwrap();
            let report = validate(&base(p0));
            prop_assert!(report.is_valid(), "{}", report);
        }
    }
}
