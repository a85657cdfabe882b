//! Distributed predictor-corrector proximal multiplier method for convex
//! quadratically constrained quadratic programs.
//!
//! ```no_run
//! use pc2pm::generators::{gen_random_qcqp, RandomQcqpSpec};
//! use pc2pm::solver::{solve, SolverConfig};
//!
//! let problem = gen_random_qcqp(&RandomQcqpSpec::with_condition(64, 2, 1.25, 7)).unwrap();
//! let report = solve(&problem, &SolverConfig::default(), None).unwrap();
//! println!("{} after {} iterations", report.status.kind, report.iterations);
//! ```

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diagnostics;
pub mod dist;
pub mod error;
pub mod generators;
pub mod matrix;
pub mod model;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
pub use matrix::ColumnMatrix;
pub use model::QcqpProblem;
pub use solver::{solve, SolveReport, SolverConfig};
