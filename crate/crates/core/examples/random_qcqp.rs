//! Generate a random convex QCQP with a chosen Hessian condition number,
//! solve it, and compare against the small-scale reference solver.
//!
//! cargo run --release --example random_qcqp -- [n1] [m1] [kappa] [seed]

use pc2pm::diagnostics::{kkt_residual_max, reference_solve_small, ORACLE_MAX_DIM};
use pc2pm::generators::{gen_random_qcqp, RandomQcqpSpec};
use pc2pm::{solve, SolverConfig};

fn arg<T: std::str::FromStr>(i: usize, default: T) -> T {
    std::env::args()
        .nth(i)
        .and_then(|s| s.parse().ok())
        .unwrap_or(default)
}

fn main() -> pc2pm::Result<()> {
    let spec = RandomQcqpSpec::with_condition(arg(1, 100), arg(2, 3), arg(3, 1.25), arg(4, 0));
    println!(
        "n1 = {}, m1 = {}, eigenvalues in [{}, {}]",
        spec.n1, spec.m1, spec.d_min, spec.d_max
    );
    let problem = gen_random_qcqp(&spec)?;

    let config = SolverConfig {
        tol: 1e-4,
        ..SolverConfig::default()
    };
    let report = solve(&problem, &config, None)?;
    println!(
        "{} after {} iterations: objective {:.8}, res1 {:.2e}, res2 {:.2e}",
        report.status.kind, report.iterations, report.objective, report.res1, report.res2
    );
    println!(
        "step size ranged over [{:.3e}, {:.3e}]",
        report.rho.min, report.rho.max
    );
    println!(
        "kkt residual at the returned point: {:.2e}",
        kkt_residual_max(&report.x, &report.u, &report.lambda, &report.gamma, &problem)
    );

    if spec.n1 <= ORACLE_MAX_DIM {
        let oracle = reference_solve_small(&problem, 1e-8)?;
        println!(
            "reference objective {:.8} ({} outer iterations), relative gap {:.2e}",
            oracle.objective,
            oracle.outer_iterations,
            (report.objective - oracle.objective).abs() / oracle.objective.abs().max(1.0)
        );
    }
    Ok(())
}
