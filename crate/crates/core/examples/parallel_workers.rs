//! Same instance on 1, 2, 4 and 8 column-partitioned workers. The answer and
//! iteration count do not depend on the worker count; wall time and the
//! per-worker share of the matrix do.

use std::time::Instant;

use pc2pm::dist::partition_columns;
use pc2pm::generators::{gen_random_qcqp, RandomQcqpSpec};
use pc2pm::solver::analytic_comm_per_iteration;
use pc2pm::{solve, SolverConfig};

fn main() -> pc2pm::Result<()> {
    let (n1, m1) = (1024, 2);
    let problem = gen_random_qcqp(&RandomQcqpSpec::with_condition(n1, m1, 1.25, 1))?;
    let per = analytic_comm_per_iteration(n1, m1, 0);
    println!(
        "per iteration: {} reduces ({} bytes), {} scatters ({} bytes)",
        per.reduce_ops, per.bytes_reduced, per.scatter_ops, per.bytes_scattered
    );

    for workers in [1, 2, 4, 8] {
        let config = SolverConfig {
            n_workers: workers,
            ..SolverConfig::default()
        };
        let t = Instant::now();
        let report = solve(&problem, &config, None)?;
        let widths: Vec<usize> = partition_columns(n1, workers)
            .ranges()
            .iter()
            .map(|r| r.len())
            .collect();
        println!(
            "{workers} workers {widths:?}: {} iterations, objective {:.12}, {:?}",
            report.iterations,
            report.objective,
            t.elapsed()
        );
    }
    Ok(())
}
