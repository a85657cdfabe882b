//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::diagnostics::{compute_residuals, kkt_residual_max};
use crate::error::{Error, Result};
use crate::generators::{
    build_mkl_qcqp, gen_infeasible, gen_random_qcqp, gen_unbounded, DatasetSource, MklSpec, RandomQcqpSpec,
    SvmKind,
};
use crate::model::{load_problem, save_problem, validate, write_json_pretty, QcqpProblem};
use crate::report::{load_point, write_report, write_trace};
use crate::solver::{IterateState, Solver, SolverConfig, StartPoint, WeightMode};

const EXIT_CODES: &str = "\
Exit codes:
  0  converged
  1  I/O, parse or validation error
  2  iteration limit reached
  3  infeasibility suspected
  4  unboundedness suspected
  5  diverged (non-finite iterates)";

#[derive(Debug, Parser)]
#[command(name = "pc2pm", version, about = "Distributed predictor-corrector solver for convex QCQPs", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem file.
    Solve(SolveArgs),
    /// Write a generated problem and its metadata sidecar.
    Generate(GenerateArgs),
    /// Print optimality residuals of a point.
    CheckKkt(CheckKktArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WeightsArg {
    Adaptive,
    Equal,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Problem JSON file.
    pub problem: PathBuf,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, default_value_t = 200_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 0.0)]
    pub eps0: f64,
    #[arg(long, value_enum, default_value = "adaptive")]
    pub weights: WeightsArg,
    #[arg(long, default_value_t = 1e12)]
    pub big_m: f64,
    #[arg(long, default_value_t = 10)]
    pub trace_every: usize,
    /// Write the solve report JSON here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the residual trace CSV here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Start from this point file instead of zeros.
    #[arg(long)]
    pub start: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub family: Family,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Problem JSON destination.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Metadata destination; defaults to the problem path with a
    /// `.meta.json` extension.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DatasetArg {
    Twonorm,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SvmArg {
    Sm1,
    Sm2,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Random convex QCQP with prescribed Hessian condition number.
    RandomQcqp {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        m1: usize,
        #[arg(long, default_value_t = 1.25)]
        cond: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Common upper bound on x (default: none).
        #[arg(long)]
        upper: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kernel-learning SVM instance.
    Mkl {
        #[arg(long, value_enum, default_value = "twonorm")]
        dataset: DatasetArg,
        /// CSV file with `label,feat1,...` rows (for `--dataset csv`).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        ntr: usize,
        /// Number of test points (default: a quarter of `--ntr`).
        #[arg(long)]
        nt: Option<usize>,
        #[arg(long, value_enum, default_value = "sm2")]
        svm: SvmArg,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Instance with a constraint that no point satisfies.
    Infeasible {
        #[arg(long)]
        n1: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Instance whose objective is unbounded below.
    Unbounded {
        #[arg(long)]
        n1: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct CheckKktArgs {
    pub problem: PathBuf,
    /// Point JSON with `x`, `u`, `lambda`, `gamma`.
    pub point: PathBuf,
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve(args) => run_solve(&args),
        Command::Generate(args) => run_generate(args.family),
        Command::CheckKkt(args) => run_check_kkt(&args),
    }
}

fn load_valid(path: &Path) -> Result<QcqpProblem> {
    let problem = load_problem(path)?;
    let report = validate(&problem);
    if !report.is_valid() {
        return Err(Error::Invalid(report.to_string()));
    }
    Ok(problem)
}

fn check_writable(path: &Option<PathBuf>) -> Result<()> {
    if let Some(p) = path {
        let dir = p.parent().filter(|d| !d.as_os_str().is_empty());
        if let Some(d) = dir {
            if !d.is_dir() {
                return Err(Error::io(
                    p,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "parent directory does not exist"),
                ));
            }
        }
    }
    Ok(())
}

pub fn run_solve(args: &SolveArgs) -> Result<i32> {
    check_writable(&args.report)?;
    check_writable(&args.trace)?;
    let problem = load_valid(&args.problem)?;
    let start = match &args.start {
        Some(p) => load_point(p)?.as_start(),
        None => StartPoint::default(),
    };
    let config = SolverConfig {
        tol: args.tol,
        max_iters: args.max_iters,
        n_workers: args.workers,
        eps0: args.eps0,
        weight_mode: match args.weights {
            WeightsArg::Adaptive => WeightMode::Adaptive,
            WeightsArg::Equal => WeightMode::Equal,
        },
        big_m: args.big_m,
        trace_every: args.trace_every,
        ..SolverConfig::default()
    };
    let report = Solver::new(&problem, config)?.run(&start)?;
    if let Some(p) = &args.report {
        write_report(&report, p)?;
    }
    if let Some(p) = &args.trace {
        write_trace(&report.trace, p)?;
    }
    println!(
        "status={} iterations={} objective={:e} res1={:e} res2={:e}",
        report.status.kind, report.iterations, report.objective, report.res1, report.res2
    );
    Ok(report.status.kind.exit_code())
}

fn meta_path(output: &OutputArgs) -> PathBuf {
    output.meta.clone().unwrap_or_else(|| {
        let stem = output
            .out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "problem".into());
        output.out.with_file_name(format!("{stem}.meta.json"))
    })
}

#[derive(Serialize)]
struct SeededMeta<'a, S: Serialize> {
    family: &'a str,
    seed: u64,
    spec: S,
}

fn emit<M: Serialize>(problem: &QcqpProblem, meta: &M, output: &OutputArgs) -> Result<i32> {
    check_writable(&Some(output.out.clone()))?;
    let meta_out = meta_path(output);
    check_writable(&Some(meta_out.clone()))?;
    let report = validate(problem);
    if !report.is_valid() {
        return Err(Error::Invalid(report.to_string()));
    }
    save_problem(problem, &output.out)?;
    write_json_pretty(meta, &meta_out)?;
    Ok(0)
}

pub fn run_generate(family: Family) -> Result<i32> {
    match family {
        Family::RandomQcqp {
            n1,
            m1,
            cond,
            seed,
            upper,
            output,
        } => {
            let mut spec = RandomQcqpSpec::with_condition(n1, m1, cond, seed);
            spec.x_upper = upper;
            let problem = gen_random_qcqp(&spec)?;
            let meta = SeededMeta {
                family: "random-qcqp",
                seed,
                spec: &spec,
            };
            emit(&problem, &meta, &output)
        }
        Family::Mkl {
            dataset,
            csv,
            ntr,
            nt,
            svm,
            c,
            seed,
            output,
        } => {
            let svm = match svm {
                SvmArg::Sm1 => SvmKind::Sm1,
                SvmArg::Sm2 => SvmKind::Sm2,
            };
            let mut spec = MklSpec::twonorm(ntr, nt.unwrap_or(ntr / 4), svm, c, seed);
            match (dataset, csv) {
                (DatasetArg::Twonorm, None) => {}
                (DatasetArg::Csv, Some(path)) => spec.dataset = DatasetSource::Csv { path },
                (DatasetArg::Csv, None) => {
                    return Err(Error::Spec("--dataset csv needs --csv <path>".into()))
                }
                (DatasetArg::Twonorm, Some(_)) => {
                    return Err(Error::Spec("--csv is only valid with --dataset csv".into()))
                }
            }
            let inst = build_mkl_qcqp(&spec)?;
            emit(&inst.problem, &inst.metadata, &output)
        }
        Family::Infeasible { n1, seed, output } => {
            let problem = gen_infeasible(n1, seed)?;
            let meta = SeededMeta {
                family: "infeasible",
                seed,
                spec: serde_json::json!({ "n1": n1 }),
            };
            emit(&problem, &meta, &output)
        }
        Family::Unbounded { n1, seed, output } => {
            let problem = gen_unbounded(n1, seed)?;
            let meta = SeededMeta {
                family: "unbounded",
                seed,
                spec: serde_json::json!({ "n1": n1 }),
            };
            emit(&problem, &meta, &output)
        }
    }
}

pub fn run_check_kkt(args: &CheckKktArgs) -> Result<i32> {
    let problem = load_valid(&args.problem)?;
    let point = load_point(&args.point)?;
    let mut state = IterateState::zeros(&problem);
    for (field, src, dst) in [
        ("x", &point.x, &mut state.x),
        ("u", &point.u, &mut state.u),
        ("lambda", &point.lambda, &mut state.lambda),
        ("gamma", &point.gamma, &mut state.gamma),
    ] {
        if src.len() != dst.len() {
            return Err(Error::Dimension {
                field: field.into(),
                expected: dst.len(),
                found: src.len(),
            });
        }
        dst.clone_from(src);
    }
    if state.lambda.iter().any(|&l| l < 0.0) {
        return Err(Error::Invalid("lambda must be nonnegative".into()));
    }
    let kkt = kkt_residual_max(&state.x, &state.u, &state.lambda, &state.gamma, &problem);
    let r = compute_residuals(&state, &problem);
    println!("kkt_residual_max={kkt:e}");
    println!("res1={:e}", r.res1);
    println!("res2={:e}", r.res2);
    Ok(0)
}
