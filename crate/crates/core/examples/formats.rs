//! Writes every file the crate produces for a tiny hand-built problem:
//! problem, report, trace and point. The output is the worked example in
//! docs/FORMATS.md.
//!
//! cargo run --example formats -- <out-dir>

use std::path::PathBuf;

use pc2pm::model::save_problem;
use pc2pm::report::{save_point, write_report, write_trace, PointFile};
use pc2pm::{solve, ColumnMatrix, QcqpProblem, SolverConfig};

fn main() -> pc2pm::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "formats-out".into()));
    std::fs::create_dir_all(&dir).map_err(|e| pc2pm::Error::Io {
        path: dir.clone(),
        source: e,
    })?;

    // minimize 1/2 |x|^2 - x1 - x2 + 0.5 u
    // s.t.     x1^2 + 0.5 x1 - 0.5 x2 - 1 <= 0
    //          x1 + x2 + u = 1,  0 <= x1 <= 1,  x2 >= 0
    let mut problem = QcqpProblem::new(ColumnMatrix::identity(2), vec![-1.0, -1.0], 0.0)?
        .with_upper(vec![1.0, f64::INFINITY])
        .with_free_block(1, vec![0.5]);
    let sparse = ColumnMatrix::from_columns(2, vec![vec![(0, 2.0)], vec![]])?;
    problem.push_quad(sparse, vec![0.5, -0.5], vec![0.0], -1.0);
    problem.set_equalities(
        ColumnMatrix::from_rows(&[vec![1.0, 1.0]], 2)?,
        ColumnMatrix::from_rows(&[vec![1.0]], 1)?,
        vec![1.0],
    );
    save_problem(&problem, dir.join("problem.json"))?;

    let config = SolverConfig {
        tol: 1e-4,
        trace_every: 100,
        ..SolverConfig::default()
    };
    let report = solve(&problem, &config, None)?;
    write_report(&report, dir.join("report.json"))?;
    write_trace(&report.trace, dir.join("trace.csv"))?;
    save_point(&PointFile::from_report(&report), dir.join("point.json"))?;
    println!(
        "{} after {} iterations, files in {}",
        report.status.kind,
        report.iterations,
        dir.display()
    );
    Ok(())
}
