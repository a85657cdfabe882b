use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, ColumnMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Kernel {
    /// `a'b`
    Linear,
    /// `(1 + a'b)^2`
    Polynomial,
    /// `exp(-||a - b||^2 / (2 sigma_sq))`
    Gaussian { sigma_sq: f64 },
}

impl Kernel {
    pub fn check(&self) -> Result<()> {
        match *self {
            Kernel::Gaussian { sigma_sq } if !(sigma_sq > 0.0 && sigma_sq.is_finite()) => Err(Error::Spec(
                format!("Gaussian kernel width must be > 0, got {sigma_sq}"),
            )),
            _ => Ok(()),
        }
    }
}

pub fn kernel_eval(kernel: &Kernel, a: &[f64], b: &[f64]) -> f64 {
    match *kernel {
        Kernel::Linear => dot(a, b),
        Kernel::Polynomial => (1.0 + dot(a, b)).powi(2),
        Kernel::Gaussian { sigma_sq } => {
            let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            (-d2 / (2.0 * sigma_sq)).exp()
        }
    }
}

/// Dense symmetric Gram matrix over `points`.
pub fn gram_matrix(kernel: &Kernel, points: &[Vec<f64>]) -> ColumnMatrix {
    let n = points.len();
    let mut data = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..=j {
            let k = kernel_eval(kernel, &points[i], &points[j]);
            data[j * n + i] = k;
            data[i * n + j] = k;
        }
    }
    ColumnMatrix::Dense {
        nrows: n,
        ncols: n,
        data,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_eval(&Kernel::Linear, &[1.0, 2.0], &[3.0, 4.0]), 11.0);
        assert_eq!(kernel_eval(&Kernel::Polynomial, &[1.0, 2.0], &[3.0, 4.0]), 144.0);
        let g = Kernel::Gaussian { sigma_sq: 0.3 };
        assert_eq!(kernel_eval(&g, &[1.5, -2.0], &[1.5, -2.0]), 1.0);
        assert!(Kernel::Gaussian { sigma_sq: 0.0 }.check().is_err());
    }

    proptest! {
        #[test]
        fn gaussian_gram_in_unit_interval(
            pts in proptest::collection::vec(proptest::collection::vec(-3.0f64..3.0, 3), 1..8),
            sigma_sq in 0.05f64..50.0,
        ) {
            let k = gram_matrix(&Kernel::Gaussian { sigma_sq }, &pts);
            for i in 0..pts.len() {
                prop_assert_eq!(k.get(i, i), 1.0);
                for j in 0..pts.len() {
                    let v = k.get(i, j);
                    prop_assert!(v > 0.0 && v <= 1.0);
                    prop_assert_eq!(v, k.get(j, i));
                }
            }
        }
    }
}
