//! Smallest possible use: build a one-variable problem by hand and solve it.
//!
//! minimize 1/2 x^2 - 2x  subject to  1/2 x^2 - 1/2 <= 0,  0 <= x <= 10
//!
//! The constraint is active at x = 1 with multiplier 1.

use pc2pm::{solve, ColumnMatrix, QcqpProblem, SolverConfig};

fn main() -> pc2pm::Result<()> {
    let mut problem = QcqpProblem::new(ColumnMatrix::identity(1), vec![-2.0], 0.0)?.with_upper(vec![10.0]);
    problem.push_quad(ColumnMatrix::identity(1), vec![0.0], vec![], -0.5);

    let config = SolverConfig {
        tol: 1e-6,
        ..SolverConfig::default()
    };
    let report = solve(&problem, &config, None)?;
    println!("status     {}", report.status.kind);
    println!("iterations {}", report.iterations);
    println!("x          {:.6}", report.x[0]);
    println!("lambda     {:.6}", report.lambda[0]);
    println!("objective  {:.6}", report.objective);
    Ok(())
}
