//! Adaptive step-size shares against fixed equal shares, and a look at which
//! of the eight step bounds ends up binding.

use pc2pm::generators::{gen_random_qcqp, RandomQcqpSpec};
use pc2pm::solver::{Solver, SolverConfig, StartPoint, WeightMode, N_COMPONENTS};

fn main() -> pc2pm::Result<()> {
    let problem = gen_random_qcqp(&RandomQcqpSpec::with_condition(256, 1, 1.25, 0))?;

    for mode in [WeightMode::Adaptive, WeightMode::Equal] {
        let config = SolverConfig {
            weight_mode: mode,
            ..SolverConfig::default()
        };
        let mut binding = [0usize; N_COMPONENTS];
        let mut last_shares = [0.0; N_COMPONENTS];
        let report = Solver::new(&problem, config)?.run_observed(&StartPoint::default(), |_, step| {
            let (arg, _) = step
                .components
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |b, (i, &c)| if c < b.1 { (i, c) } else { b });
            binding[arg] += 1;
            last_shares = step.epsilons;
        })?;
        println!(
            "{mode:?}: {} in {} iterations",
            report.status.kind, report.iterations
        );
        println!("  binding counts per bound {binding:?}");
        let shares: Vec<String> = last_shares.iter().map(|e| format!("{e:.3}")).collect();
        println!("  final shares [{}]", shares.join(", "));
    }
    Ok(())
}
