use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use sparsebox::{
    generate_with_noise, lmtr_solve, tr_solve, Config, Instance, Outcome, QuasiNewtonKind,
    Termination,
};

use super::{usage, Status};
use crate::manifest::Manifest;
use crate::table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    TrLsr1,
    TrLbfgs,
    Lmtr,
}

impl Solver {
    fn label(self) -> &'static str {
        match self {
            Solver::TrLsr1 | Solver::TrLbfgs => "TR",
            Solver::Lmtr => "LMTR",
        }
    }

    fn name(self) -> &'static str {
        match self {
            Solver::TrLsr1 => "tr-lsr1",
            Solver::TrLbfgs => "tr-lbfgs",
            Solver::Lmtr => "lmtr",
        }
    }
}

#[derive(Debug, Args)]
pub struct BpdnArgs {
    #[arg(long, value_enum, default_value = "tr-lsr1")]
    solver: Solver,
    /// Number of measurements
    #[arg(long, default_value_t = 200)]
    m: usize,
    /// Signal length
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Number of spikes, also the sparsity constraint
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stopping tolerance
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Standard deviation of the measurement noise
    #[arg(long, default_value_t = 0.01)]
    noise_std: f64,
    #[arg(long, default_value_t = 500)]
    max_outer: usize,
    /// Quasi-Newton memory (TR solvers)
    #[arg(long, default_value_t = 5)]
    memory: usize,
    /// Directory for the CSV outputs and the manifest
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Also write the generated instance to <out-dir>/instance.csv
    #[arg(long, requires = "out_dir")]
    export_instance: bool,
}

pub fn run(args: &BpdnArgs) -> Result<Status> {
    let inst = generate_with_noise::<f64>(args.m, args.n, args.k, args.seed, args.noise_std)
        .map_err(|e| usage(e.to_string()))?;
    let mut config = Config {
        epsilon: args.eps,
        max_outer: args.max_outer,
        memory: args.memory,
        ..Config::default()
    };
    config.quasi_newton = match args.solver {
        Solver::TrLbfgs => QuasiNewtonKind::Lbfgs,
        _ => QuasiNewtonKind::Lsr1,
    };
    config.validate().map_err(|e| usage(e.to_string()))?;

    let problem = inst.as_problem();
    let outcome = match args.solver {
        Solver::Lmtr => lmtr_solve(&problem, &config)?,
        _ => tr_solve(&problem, &config)?,
    };

    let last = match args.solver {
        Solver::Lmtr => "1/ν",
        _ => "‖Bⱼ‖",
    };
    println!("{}", table::header(last));
    for r in &outcome.records {
        println!("{}", table::row(r));
    }
    let label = args.solver.label();
    match outcome.termination {
        Termination::Converged { xi1 } => println!("{label}: terminating with ξ1 = {xi1:e}"),
        Termination::SmallModelDecrease { xi } => {
            println!("{label}: terminating on negligible model decrease ξ = {xi:e}")
        }
        Termination::MaxOuter => println!(
            "{label}: maximum number of outer iterations reached ({})",
            args.max_outer
        ),
    }
    let rel = inst.relative_error(&outcome.solution)?;
    println!("{label} relative error");
    println!("     norm({label}_out.solution - sol) / norm(sol) = {rel}");

    if let Some(dir) = &args.out_dir {
        write_outputs(dir, args, &inst, &outcome)?;
    }
    Ok(Status::Success)
}

fn csv_line(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

fn full(v: f64) -> String {
    format!("{v:.16e}")
}

fn solution_csv(inst: &Instance, outcome: &Outcome) -> String {
    let mut s = String::from("index,x,x_star\n");
    for (i, (x, t)) in outcome.solution.iter().zip(&inst.x_star).enumerate() {
        csv_line(&mut s, &[i.to_string(), full(*x), full(*t)]);
    }
    s
}

fn errors_csv(inst: &Instance, outcome: &Outcome) -> String {
    let mut s = String::from("index,abs_error\n");
    for (i, (x, t)) in outcome.solution.iter().zip(&inst.x_star).enumerate() {
        csv_line(&mut s, &[i.to_string(), full((x - t).abs())]);
    }
    s
}

fn history_csv(outcome: &Outcome) -> String {
    let mut s = String::from("evaluations,objective\n");
    for h in &outcome.history {
        csv_line(&mut s, &[h.evaluations.to_string(), full(h.objective)]);
    }
    s
}

fn steps_csv(outcome: &Outcome, n: usize) -> String {
    let steps: Vec<&Vec<f64>> = outcome.accepted_steps.iter().take(3).collect();
    let mut s = String::from("index");
    for j in 1..=steps.len() {
        let _ = write!(s, ",step{j}");
    }
    s.push('\n');
    for i in 0..n {
        let mut fields = vec![i.to_string()];
        fields.extend(steps.iter().map(|st| full(st[i])));
        csv_line(&mut s, &fields);
    }
    s
}

fn write_outputs(dir: &Path, args: &BpdnArgs, inst: &Instance, outcome: &Outcome) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut manifest = Manifest::new("bpdn", dir);
    manifest.set("solver", args.solver.name());
    manifest.set("m", args.m);
    manifest.set("n", args.n);
    manifest.set("k", args.k);
    manifest.set("seed", args.seed);
    manifest.set("eps", format!("{:e}", args.eps));
    manifest.set("noise_std", format!("{:e}", args.noise_std));
    manifest.set("max_outer", args.max_outer);
    manifest.set("memory", args.memory);
    manifest.set("outer_iterations", outcome.outer_iterations);

    let mut files = vec![
        ("solution.csv", solution_csv(inst, outcome)),
        ("errors.csv", errors_csv(inst, outcome)),
        ("history.csv", history_csv(outcome)),
        ("steps.csv", steps_csv(outcome, inst.cols())),
    ];
    if args.export_instance {
        let mut buf = Vec::new();
        inst.write_csv(&mut buf)?;
        files.push(("instance.csv", String::from_utf8(buf)?));
    }
    for (name, contents) in &files {
        let path = dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        manifest.add_file(name, contents.as_bytes());
    }
    manifest.write()
}
