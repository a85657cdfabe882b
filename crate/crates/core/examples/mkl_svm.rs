//! Multiple kernel learning as a QCQP: pick a combination of five Gaussian
//! kernels for a soft-margin SVM on the two-norm benchmark.
//!
//! cargo run --release --example mkl_svm -- [n_train] [seed]

use pc2pm::diagnostics::{recover_bias, test_set_accuracy};
use pc2pm::generators::{build_mkl_qcqp, Kernel, MklSpec, SvmKind};
use pc2pm::{solve, SolverConfig};

fn main() -> pc2pm::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_tr: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(160);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let spec = MklSpec::twonorm(n_tr, n_tr / 4, SvmKind::Sm2, 1.0, seed);
    let inst = build_mkl_qcqp(&spec)?;
    let report = solve(&inst.problem, &SolverConfig::default(), None)?;
    println!("{} after {} iterations", report.status.kind, report.iterations);

    let total: f64 = report.lambda.iter().sum();
    println!("kernel weights (sum {total:.4}):");
    for (k, w) in spec.kernels.iter().zip(&report.lambda) {
        let name = match k {
            Kernel::Gaussian { sigma_sq } => format!("gaussian sigma^2 = {sigma_sq}"),
            other => format!("{other:?}"),
        };
        println!("  {name:<24} {w:.4}");
    }
    let support = report.x.iter().filter(|&&a| a > 1e-6).count();
    println!(
        "{support} support vectors, bias {:.4}",
        recover_bias(&report.x, &report.lambda, &inst.metadata)
    );
    println!(
        "test accuracy {:.3} on {} points",
        test_set_accuracy(&report.x, &report.lambda, &inst.metadata)?,
        inst.metadata.test.len()
    );
    Ok(())
}
