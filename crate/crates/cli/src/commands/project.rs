use anyhow::Result;
use clap::Args;
use sparsebox::oracle::enumerate_projection;
use sparsebox::stationarity::DEFAULT_TOL;
use sparsebox::{project_intersection, stationarity_report, Region};

use super::{usage, Status};
use crate::vectors::{join, parse_vector};

/// Largest dimension for which `--check` also runs the exhaustive oracle.
const ORACLE_MAX_N: usize = 12;

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// Point to project: comma-separated list or single-column file
    #[arg(long, allow_hyphen_values = true)]
    w: String,
    /// Box center, at most k nonzeros: comma-separated list or file
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Box radius
    #[arg(long, allow_hyphen_values = true)]
    delta: f64,
    /// Sparsity level
    #[arg(long)]
    k: usize,
    /// Run the optimality checks, and the oracle when n <= 12
    #[arg(long)]
    check: bool,
}

pub fn run(args: &ProjectArgs) -> Result<Status> {
    let w = parse_vector(&args.w).map_err(|e| usage(format!("--w: {e:#}")))?;
    let x = parse_vector(&args.x).map_err(|e| usage(format!("--x: {e:#}")))?;
    if w.len() != x.len() {
        return Err(usage(format!(
            "--w has {} entries but --x has {}",
            w.len(),
            x.len()
        )));
    }
    let region = Region::new(x, args.delta, args.k).map_err(|e| usage(e.to_string()))?;
    let p = project_intersection(&w, &region).map_err(|e| usage(e.to_string()))?;

    println!("point: {}", join(&p.point));
    let support: Vec<String> = p.support.iter().map(|i| i.to_string()).collect();
    println!(
        "support: {}",
        if support.is_empty() {
            "(empty)".to_string()
        } else {
            support.join(", ")
        }
    );
    println!("distance: {}", p.sq_distance.sqrt());
    println!("squared distance: {}", p.sq_distance);

    if !args.check {
        return Ok(Status::Success);
    }
    let scale = w
        .iter()
        .chain(region.center())
        .fold(region.radius().max(1.0), |m, v| m.max(v.abs()));
    let tol = DEFAULT_TOL * scale * scale;
    let report = stationarity_report(&p.point, &w, &region, 2.0, tol)?;
    let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
    println!("check basic feasible: {}", verdict(report.basic_feasible));
    println!(
        "check L-stationary (L = 2): {}",
        verdict(report.l_stationary_fixed_point)
    );
    println!("check CW minimum: {}", verdict(report.cw_minimum));
    for v in &report.violations {
        println!(
            "  violation at index {}: {} (residual {:e})",
            v.index, v.condition, v.residual
        );
    }
    let mut ok = report.all_pass();
    if w.len() <= ORACLE_MAX_N {
        let oracle = enumerate_projection(&w, &region)?;
        let gap = (p.sq_distance - oracle.best_distance_sq).abs();
        let matches = gap <= 1e-12 * oracle.best_distance_sq.max(f64::MIN_POSITIVE);
        println!(
            "check oracle: {} (best squared distance {}, {} minimizer{})",
            verdict(matches),
            oracle.best_distance_sq,
            oracle.minimizers.len(),
            if oracle.minimizers.len() == 1 {
                ""
            } else {
                "s"
            }
        );
        ok &= matches;
    } else {
        println!("check oracle: skipped (n > {ORACLE_MAX_N})");
    }
    Ok(if ok {
        Status::Success
    } else {
        Status::ValidationFailed
    })
}
