//! The residual history tells an infeasible instance from an unbounded one.
//!
//! On the infeasible instance the complementarity/equality residual keeps
//! growing; on the unbounded one the stationarity residual settles at a
//! positive value while the other goes to zero.

use pc2pm::generators::{gen_infeasible, gen_unbounded};
use pc2pm::{solve, QcqpProblem, SolverConfig};

fn run(name: &str, problem: &QcqpProblem) -> pc2pm::Result<()> {
    let config = SolverConfig {
        max_iters: 50_000,
        ..SolverConfig::default()
    };
    let report = solve(problem, &config, None)?;
    println!(
        "{name}: {} after {} iterations",
        report.status.kind, report.iterations
    );
    println!("  {}", report.status.message);
    let step = (report.trace.len() / 5).max(1);
    for row in report.trace.iter().step_by(step) {
        println!(
            "  iter {:>6}  res1 {:.4e}  res2 {:.4e}",
            row.iter, row.res1, row.res2
        );
    }
    Ok(())
}

fn main() -> pc2pm::Result<()> {
    run("infeasible", &gen_infeasible(64, 0)?)?;
    run("unbounded", &gen_unbounded(64, 0)?)?;
    Ok(())
}
