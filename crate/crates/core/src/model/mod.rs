//! Problem data for convex QCQPs of the form
//!
//! ```text
//! minimize    1/2 x' P0 x + q0' x + c0' u + r0
//! subject to  1/2 x' Pi x + qi' x + ci' u + ri <= 0,   i = 1..m1
//!             A x + B u = b
//!             0 <= x_j <= xbar_j,  u free
//! ```
//!
//! Index 0 of the `quad`, `lin_x`, `lin_u` and `constant` vectors is the
//! objective; indices `1..=m1` are the quadratic constraints.

mod io;
mod validate;

pub use io::{load_problem, save_problem, write_json_pretty};
pub use validate::{validate, ValidationReport, Violation};

use crate::error::{Error, Result};
use crate::matrix::{dot, ColumnMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct QcqpProblem {
    /// Dimension of the boxed primal block `x`.
    pub n_x: usize,
    /// Dimension of the free primal block `u` (may be 0).
    pub n_u: usize,
    /// Number of quadratic inequality constraints.
    pub n_quad: usize,
    /// Number of linear equality constraints.
    pub n_eq: usize,
    /// Hessians `P_0..P_m1`, each `n_x x n_x`.
    pub quad: Vec<ColumnMatrix>,
    /// Linear terms in `x`, `q_0..q_m1`.
    pub lin_x: Vec<Vec<f64>>,
    /// Linear terms in `u`, `c_0..c_m1`.
    pub lin_u: Vec<Vec<f64>>,
    /// Constants `r_0..r_m1`.
    pub constant: Vec<f64>,
    /// `A`, `n_eq x n_x`.
    pub eq_x: ColumnMatrix,
    /// `B`, `n_eq x n_u`.
    pub eq_u: ColumnMatrix,
    /// Right-hand side `b`.
    pub eq_rhs: Vec<f64>,
    /// Upper box bounds, `+inf` allowed; the lower bound is always 0.
    pub x_upper: Vec<f64>,
}

impl QcqpProblem {
    /// An unconstrained-in-`u` problem with objective `1/2 x'P0x + q0'x + r0`
    /// and no box upper bounds. Constraints are added with [`Self::push_quad`]
    /// and [`Self::set_equalities`].
    pub fn new(p0: ColumnMatrix, q0: Vec<f64>, r0: f64) -> Result<Self> {
        let n = q0.len();
        if p0.nrows() != n || p0.ncols() != n {
            return Err(Error::dim("P[0]", n, p0.nrows().max(p0.ncols())));
        }
        Ok(QcqpProblem {
            n_x: n,
            n_u: 0,
            n_quad: 0,
            n_eq: 0,
            quad: vec![p0],
            lin_x: vec![q0],
            lin_u: vec![Vec::new()],
            constant: vec![r0],
            eq_x: ColumnMatrix::zeros(0, n),
            eq_u: ColumnMatrix::zeros(0, 0),
            eq_rhs: Vec::new(),
            x_upper: vec![f64::INFINITY; n],
        })
    }

    pub fn with_upper(mut self, upper: Vec<f64>) -> Self {
        self.x_upper = upper;
        self
    }

    /// Resizes the `u` block, resetting every `c_i` to zeros and `B` to an
    /// all-zero matrix of the new width.
    pub fn with_free_block(mut self, n_u: usize, objective_lin_u: Vec<f64>) -> Self {
        self.n_u = n_u;
        for c in self.lin_u.iter_mut() {
            *c = vec![0.0; n_u];
        }
        self.lin_u[0] = objective_lin_u;
        self.eq_u = ColumnMatrix::zeros(self.n_eq, n_u);
        self
    }

    pub fn push_quad(&mut self, p: ColumnMatrix, q: Vec<f64>, c: Vec<f64>, r: f64) {
        self.quad.push(p);
        self.lin_x.push(q);
        self.lin_u.push(c);
        self.constant.push(r);
        self.n_quad += 1;
    }

    pub fn set_equalities(&mut self, a: ColumnMatrix, b_u: ColumnMatrix, rhs: Vec<f64>) {
        self.n_eq = rhs.len();
        self.eq_x = a;
        self.eq_u = b_u;
        self.eq_rhs = rhs;
    }

    /// Checks that every field has the dimensions implied by
    /// `(n_x, n_u, n_quad, n_eq)`.
    pub fn check_dimensions(&self) -> Result<()> {
        let (n1, n2, m1, m2) = (self.n_x, self.n_u, self.n_quad, self.n_eq);
        let expect = |field: &str, want: usize, got: usize| {
            if want == got {
                Ok(())
            } else {
                Err(Error::dim(field, want, got))
            }
        };
        expect("P", m1 + 1, self.quad.len())?;
        expect("q", m1 + 1, self.lin_x.len())?;
        expect("c", m1 + 1, self.lin_u.len())?;
        expect("r", m1 + 1, self.constant.len())?;
        for (i, p) in self.quad.iter().enumerate() {
            expect(&format!("P[{i}] rows"), n1, p.nrows())?;
            expect(&format!("P[{i}] cols"), n1, p.ncols())?;
        }
        for (i, q) in self.lin_x.iter().enumerate() {
            expect(&format!("q[{i}]"), n1, q.len())?;
        }
        for (i, c) in self.lin_u.iter().enumerate() {
            expect(&format!("c[{i}]"), n2, c.len())?;
        }
        expect("A rows", m2, self.eq_x.nrows())?;
        expect("A cols", n1, self.eq_x.ncols())?;
        expect("B rows", m2, self.eq_u.nrows())?;
        expect("B cols", n2, self.eq_u.ncols())?;
        expect("b", m2, self.eq_rhs.len())?;
        expect("x_upper", n1, self.x_upper.len())?;
        Ok(())
    }

    /// `1/2 x'P_i x + q_i'x + c_i'u + r_i`; index 0 is the objective.
    pub fn quad_value(&self, i: usize, x: &[f64], u: &[f64]) -> f64 {
        let px = self.quad[i].matvec(x);
        0.5 * dot(x, &px) + dot(&self.lin_x[i], x) + dot(&self.lin_u[i], u) + self.constant[i]
    }

    pub fn objective(&self, x: &[f64], u: &[f64]) -> f64 {
        self.quad_value(0, x, u)
    }

    /// Values of the `m1` quadratic constraints.
    pub fn constraint_values(&self, x: &[f64], u: &[f64]) -> Vec<f64> {
        (1..=self.n_quad).map(|i| self.quad_value(i, x, u)).collect()
    }

    /// `A x + B u - b`.
    pub fn equality_residual(&self, x: &[f64], u: &[f64]) -> Vec<f64> {
        let mut r = self.eq_x.matvec(x);
        let bu = self.eq_u.matvec(u);
        for ((ri, bi), rhs) in r.iter_mut().zip(bu).zip(&self.eq_rhs) {
            *ri += bi - rhs;
        }
        r
    }

    /// `P_0 x + q_0 + sum_i w_i (P_i x + q_i) + A' g`, the x-gradient of the
    /// Lagrangian at multipliers `(w, g)`.
    pub fn lagrangian_grad_x(&self, x: &[f64], weights: &[f64], eq_mult: &[f64]) -> Vec<f64> {
        let mut g = self.quad[0].matvec(x);
        for (gj, qj) in g.iter_mut().zip(&self.lin_x[0]) {
            *gj += qj;
        }
        for (i, &w) in weights.iter().enumerate() {
            let pix = self.quad[i + 1].matvec(x);
            for ((gj, pj), qj) in g.iter_mut().zip(pix).zip(&self.lin_x[i + 1]) {
                *gj += w * (pj + qj);
            }
        }
        for (gj, aj) in g.iter_mut().zip(self.eq_x.transpose_matvec(eq_mult)) {
            *gj += aj;
        }
        g
    }

    /// `c_0 + sum_i w_i c_i + B' g`, the u-gradient of the Lagrangian.
    pub fn lagrangian_grad_u(&self, weights: &[f64], eq_mult: &[f64]) -> Vec<f64> {
        let mut g = self.lin_u[0].clone();
        for (i, &w) in weights.iter().enumerate() {
            for (gj, cj) in g.iter_mut().zip(&self.lin_u[i + 1]) {
                *gj += w * cj;
            }
        }
        for (gj, bj) in g.iter_mut().zip(self.eq_u.transpose_matvec(eq_mult)) {
            *gj += bj;
        }
        g
    }

    /// Projection of `value` onto `[0, x_upper[j]]`.
    #[inline]
    pub fn project(&self, j: usize, value: f64) -> f64 {
        project_box(value, self.x_upper[j])
    }
}

#[inline]
pub(crate) fn project_box(value: f64, upper: f64) -> f64 {
    if value < 0.0 {
        0.0
    } else if value > upper {
        upper
    } else {
        value
    }
}

/// Frobenius norms consumed by the step-size rule. All are computed once per
/// problem.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ProblemNorms {
    /// `||P_0||_F`
    pub objective_quad: f64,
    /// `||P_i||_F` for `i = 1..m1`.
    pub constraint_quad: Vec<f64>,
    /// Frobenius norm of the stacked `(P_1; ...; P_m1)`.
    pub stacked_quad: f64,
    /// Frobenius norm of the stacked `(q_1'; ...; q_m1')`.
    pub stacked_lin_x: f64,
    /// Frobenius norm of the stacked `(c_1'; ...; c_m1')`.
    pub stacked_lin_u: f64,
    pub eq_x: f64,
    pub eq_u: f64,
}

pub fn compute_norms(problem: &QcqpProblem) -> ProblemNorms {
    let constraint_sq: Vec<f64> = problem.quad[1..].iter().map(|p| p.frobenius_sq()).collect();
    let stacked_sq = |vs: &[Vec<f64>]| -> f64 { vs.iter().flatten().map(|v| v * v).sum() };
    ProblemNorms {
        objective_quad: problem.quad[0].frobenius(),
        constraint_quad: constraint_sq.iter().map(|s| s.sqrt()).collect(),
        stacked_quad: constraint_sq.iter().sum::<f64>().sqrt(),
        stacked_lin_x: stacked_sq(&problem.lin_x[1..]).sqrt(),
        stacked_lin_u: stacked_sq(&problem.lin_u[1..]).sqrt(),
        eq_x: problem.eq_x.frobenius(),
        eq_u: problem.eq_u.frobenius(),
    }
}
