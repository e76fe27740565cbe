use anyhow::Result;
use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sparsebox::validation::{fixtures, random_instance, validate_instance};

use super::{usage, Status};
use crate::vectors::join;

/// Keeps the exhaustive oracle well under a second per instance.
const MAX_N: usize = 20;

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Largest dimension drawn; 2 or more also runs the fixed examples
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn run(args: &ValidateArgs) -> Result<Status> {
    if args.max_n == 0 || args.max_n > MAX_N {
        return Err(usage(format!("--max-n must be in 1..={MAX_N}")));
    }
    let mut failures = 0;

    if args.max_n >= 2 {
        let all = fixtures();
        let mut passed = 0;
        for f in &all {
            let report = validate_instance(&f.w, &f.region)?;
            if report.passed() && report.projected_sq == f.sq_distance {
                passed += 1;
            } else {
                println!("fixture {} failed: {report:?}", f.name);
            }
        }
        println!("fixtures: {passed}/{} pass", all.len());
        failures += all.len() - passed;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut passed = 0;
    for trial in 0..args.trials {
        let inst = random_instance(&mut rng, args.max_n);
        let report = validate_instance(&inst.w, &inst.region)?;
        if report.passed() {
            passed += 1;
            continue;
        }
        failures += 1;
        let r = &inst.region;
        println!(
            "trial {trial} failed (seed {}, regime {:?})",
            args.seed, inst.regime
        );
        println!("  w     = {}", join(&inst.w));
        println!("  x     = {}", join(r.center()));
        println!("  delta = {}, k = {}", r.radius(), r.sparsity());
        println!("  {report:?}");
    }
    println!("random: {passed}/{} pass", args.trials);

    Ok(if failures == 0 {
        Status::Success
    } else {
        Status::ValidationFailed
    })
}
