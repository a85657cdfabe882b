//! File round trip: write a problem, read it back, solve, save the report,
//! trace and point, then warm-start from the saved point.

use pc2pm::diagnostics::kkt_residual_max;
use pc2pm::generators::{gen_random_qcqp, RandomQcqpSpec};
use pc2pm::model::{load_problem, save_problem};
use pc2pm::report::{load_point, save_point, write_report, write_trace, PointFile};
use pc2pm::{solve, SolverConfig};

fn main() -> pc2pm::Result<()> {
    let dir = std::env::temp_dir().join("pc2pm-problem-files");
    std::fs::create_dir_all(&dir).map_err(|e| pc2pm::Error::Io {
        path: dir.clone(),
        source: e,
    })?;

    let mut spec = RandomQcqpSpec::with_condition(40, 2, 10.0, 3);
    spec.x_upper = Some(0.5);
    save_problem(&gen_random_qcqp(&spec)?, dir.join("problem.json"))?;
    let problem = load_problem(dir.join("problem.json"))?;

    let report = solve(&problem, &SolverConfig::default(), None)?;
    write_report(&report, dir.join("report.json"))?;
    write_trace(&report.trace, dir.join("trace.csv"))?;
    save_point(&PointFile::from_report(&report), dir.join("point.json"))?;
    println!("cold start: {} iterations", report.iterations);

    let point = load_point(dir.join("point.json"))?;
    println!(
        "kkt residual of the saved point {:.3e}",
        kkt_residual_max(&point.x, &point.u, &point.lambda, &point.gamma, &problem)
    );
    let tighter = SolverConfig {
        tol: 1e-6,
        ..SolverConfig::default()
    };
    let warm = solve(&problem, &tighter, Some(&point.as_start()))?;
    println!("warm start to tol 1e-6: {} more iterations", warm.iterations);
    println!("files in {}", dir.display());
    Ok(())
}
