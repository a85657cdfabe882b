//! Test-side reference computations. Everything here works on dense row
//! copies of the problem data and avoids the library's evaluation code.

#![allow(dead_code, clippy::needless_range_loop)]

use pc2pm::matrix::ColumnMatrix;
use pc2pm::QcqpProblem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Dense {
    pub n_x: usize,
    pub n_u: usize,
    pub p: Vec<Vec<Vec<f64>>>,
    pub q: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
    pub r: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Dense {
    pub fn of(problem: &QcqpProblem) -> Self {
        Dense {
            n_x: problem.n_x,
            n_u: problem.n_u,
            p: problem.quad.iter().map(|m| m.to_rows()).collect(),
            q: problem.lin_x.clone(),
            c: problem.lin_u.clone(),
            r: problem.constant.clone(),
            a: problem.eq_x.to_rows(),
            b: problem.eq_u.to_rows(),
            rhs: problem.eq_rhs.clone(),
            upper: problem.x_upper.clone(),
        }
    }

    pub fn m1(&self) -> usize {
        self.p.len() - 1
    }

    pub fn m2(&self) -> usize {
        self.rhs.len()
    }

    fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
        m.iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn mat_t_vec(m: &[Vec<f64>], v: &[f64], ncols: usize) -> Vec<f64> {
        let mut out = vec![0.0; ncols];
        for (row, &vi) in m.iter().zip(v) {
            for (o, &mij) in out.iter_mut().zip(row) {
                *o += mij * vi;
            }
        }
        out
    }

    pub fn quad(&self, i: usize, x: &[f64], u: &[f64]) -> f64 {
        let px = Self::mat_vec(&self.p[i], x);
        0.5 * dot(x, &px) + dot(&self.q[i], x) + dot(&self.c[i], u) + self.r[i]
    }

    pub fn constraints(&self, x: &[f64], u: &[f64]) -> Vec<f64> {
        (1..=self.m1()).map(|i| self.quad(i, x, u)).collect()
    }

    pub fn eq_residual(&self, x: &[f64], u: &[f64]) -> Vec<f64> {
        let ax = Self::mat_vec(&self.a, x);
        let bu = Self::mat_vec(&self.b, u);
        (0..self.m2()).map(|k| ax[k] + bu[k] - self.rhs[k]).collect()
    }

    pub fn grad_x(&self, x: &[f64], w: &[f64], g: &[f64]) -> Vec<f64> {
        let mut out = Self::mat_vec(&self.p[0], x);
        for (o, q) in out.iter_mut().zip(&self.q[0]) {
            *o += q;
        }
        for (i, &wi) in w.iter().enumerate() {
            let pix = Self::mat_vec(&self.p[i + 1], x);
            for j in 0..self.n_x {
                out[j] += wi * (pix[j] + self.q[i + 1][j]);
            }
        }
        let atg = Self::mat_t_vec(&self.a, g, self.n_x);
        for (o, v) in out.iter_mut().zip(atg) {
            *o += v;
        }
        out
    }

    pub fn grad_u(&self, w: &[f64], g: &[f64]) -> Vec<f64> {
        let mut out = self.c[0].clone();
        for (i, &wi) in w.iter().enumerate() {
            for j in 0..self.n_u {
                out[j] += wi * self.c[i + 1][j];
            }
        }
        let btg = Self::mat_t_vec(&self.b, g, self.n_u);
        for (o, v) in out.iter_mut().zip(btg) {
            *o += v;
        }
        out
    }

    pub fn frob(m: &[Vec<f64>]) -> f64 {
        m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn random_psd(n: usize, rank: usize, rng: &mut impl Rng) -> ColumnMatrix {
    let m: Vec<Vec<f64>> = (0..rank)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (0..rank).map(|t| m[t][a] * m[t][b]).sum())
                .collect()
        })
        .collect();
    ColumnMatrix::from_rows(&rows, n).unwrap()
}

/// Small random convex instance with every block present, feasible at
/// `x = 0, u = 0` for the inequalities.
pub fn small_instance(seed: u64) -> QcqpProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..7);
    let n_u = rng.random_range(0..3);
    let m1 = rng.random_range(0..4);
    let m2 = rng.random_range(0..3);
    let rank = rng.random_range(0..=n);
    let mut p = QcqpProblem::new(
        random_psd(n, rank, &mut rng),
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        rng.random_range(-1.0..1.0),
    )
    .unwrap()
    .with_upper(
        (0..n)
            .map(|_| {
                if rng.random_bool(0.5) {
                    f64::INFINITY
                } else {
                    rng.random_range(0.2..3.0)
                }
            })
            .collect(),
    )
    .with_free_block(n_u, (0..n_u).map(|_| rng.random_range(-1.0..1.0)).collect());
    for _ in 0..m1 {
        let rank = rng.random_range(0..=n);
        p.push_quad(
            random_psd(n, rank, &mut rng),
            (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
            (0..n_u).map(|_| rng.random_range(-1.0..1.0)).collect(),
            rng.random_range(-1.0..0.0),
        );
    }
    let a: Vec<Vec<f64>> = (0..m2)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let b: Vec<Vec<f64>> = (0..m2)
        .map(|_| (0..n_u).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    p.set_equalities(
        ColumnMatrix::from_rows(&a, n).unwrap(),
        ColumnMatrix::from_rows(&b, n_u).unwrap(),
        (0..m2).map(|_| rng.random_range(-1.0..1.0)).collect(),
    );
    p
}

/// Random point with `x` in the box and `lambda >= 0`.
pub fn random_point(problem: &QcqpProblem, rng: &mut impl Rng) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let x = problem
        .x_upper
        .iter()
        .map(|&ub| match rng.random_range(0..4) {
            0 => 0.0,
            1 if ub.is_finite() => ub,
            _ => rng.random_range(0.0..ub.min(3.0)),
        })
        .collect();
    let u = (0..problem.n_u).map(|_| rng.random_range(-2.0..2.0)).collect();
    let lambda = (0..problem.n_quad)
        .map(|_| {
            if rng.random_bool(0.3) {
                0.0
            } else {
                rng.random_range(0.0..3.0)
            }
        })
        .collect();
    let gamma = (0..problem.n_eq).map(|_| rng.random_range(-2.0..2.0)).collect();
    (x, u, lambda, gamma)
}

/// Random instance that is feasible and has a bounded objective: `P0` is
/// positive definite, a strictly feasible interior point `x0` satisfies every
/// equality, and `u` enters only through the equalities with `B = I`.
pub fn bounded_instance(seed: u64) -> QcqpProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..7);
    let n_u = rng.random_range(0..2);
    let m1 = rng.random_range(0..4);
    let m2 = if n_u > 0 { n_u } else { rng.random_range(0..2) };
    let upper: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random_bool(0.5) {
                f64::INFINITY
            } else {
                rng.random_range(1.0..3.0)
            }
        })
        .collect();
    let x0: Vec<f64> = upper.iter().map(|&ub| 0.5 * ub.min(1.0)).collect();
    let mut p0 = random_psd(n, rng.random_range(0..=n), &mut rng).to_rows();
    for (j, row) in p0.iter_mut().enumerate() {
        row[j] += 1.0;
    }
    let mut p = QcqpProblem::new(
        ColumnMatrix::from_rows(&p0, n).unwrap(),
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        0.0,
    )
    .unwrap()
    .with_upper(upper)
    .with_free_block(n_u, vec![0.0; n_u]);
    for _ in 0..m1 {
        let pi = random_psd(n, rng.random_range(0..=n), &mut rng);
        let q: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let at_x0 = 0.5 * dot(&x0, &pi.matvec(&x0)) + dot(&q, &x0);
        p.push_quad(pi, q, vec![0.0; n_u], -at_x0 - rng.random_range(0.1..1.0));
    }
    let a: Vec<Vec<f64>> = (0..m2)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let b: Vec<Vec<f64>> = (0..m2)
        .map(|k| (0..n_u).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
        .collect();
    let rhs = a.iter().map(|row| dot(row, &x0)).collect();
    p.set_equalities(
        ColumnMatrix::from_rows(&a, n).unwrap(),
        ColumnMatrix::from_rows(&b, n_u).unwrap(),
        rhs,
    );
    p
}
