use sparsebox::linalg::norm_inf;
use sparsebox::solvers::{LeastSquares, RegularizedProblem, Residual};
use sparsebox::{generate, generate_with_noise, lmtr_solve, tr_solve, Config, QuasiNewtonKind};

/// `F(x) = x − c`
struct Shift(Vec<f64>);

impl Residual<f64> for Shift {
    fn residual_dim(&self) -> usize {
        self.0.len()
    }
    fn residual(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.0).map(|(a, b)| a - b).collect()
    }
    fn jacobian_product(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }
    fn jacobian_transpose_product(&self, _x: &[f64], u: &[f64]) -> Vec<f64> {
        u.to_vec()
    }
}

fn configs() -> Vec<(&'static str, Config)> {
    let lbfgs = Config {
        quasi_newton: QuasiNewtonKind::Lbfgs,
        ..Config::default()
    };
    vec![("lsr1", Config::default()), ("lbfgs", lbfgs)]
}

#[test]
fn tr_iterates_are_feasible_and_monotone() {
    let inst = generate::<f64>(60, 120, 5, 4).unwrap();
    let p = inst.as_problem();
    for (name, cfg) in configs() {
        let out = tr_solve(&p, &cfg).unwrap();
        assert!(out.converged(), "{name}");
        assert!(out.solution.iter().filter(|v| **v != 0.0).count() <= 5);
        for pair in out.history.windows(2) {
            assert!(pair[1].objective <= pair[0].objective, "{name}");
        }
        for r in &out.records {
            assert_eq!(r.h, 0.0);
            assert!(r.norm_s <= r.delta * (1.0 + 1e-12), "{name}: {r:?}");
        }
        for s in &out.accepted_steps {
            assert!(norm_inf(s) > 0.0);
        }
        assert!(out.xi1_final <= out.stopping_threshold_sq(cfg.epsilon));
    }
}

#[test]
fn lmtr_ratio_is_one_on_linear_residuals() {
    let inst = generate::<f64>(60, 120, 5, 9).unwrap();
    let out = lmtr_solve(&inst.as_problem(), &Config::default()).unwrap();
    assert!(out.converged());
    assert!(!out.records.is_empty());
    for r in &out.records {
        assert!((r.rho - 1.0).abs() <= 1e-6, "{r:?}");
        assert_eq!(r.curvature, 1.0);
    }
}

#[test]
fn noiseless_instance_is_recovered() {
    let inst = generate_with_noise::<f64>(80, 160, 6, 12, 0.0).unwrap();
    let p = inst.as_problem();
    let lm = lmtr_solve(&p, &Config::default()).unwrap();
    assert!(inst.relative_error(&lm.solution).unwrap() <= 1e-6);
    // the quasi-Newton model is only accurate up to the stopping tolerance
    let cfg = Config {
        epsilon: 1e-8,
        ..Config::default()
    };
    let tr = tr_solve(&p, &cfg).unwrap();
    assert!(inst.relative_error(&tr.solution).unwrap() <= 1e-6);
}

#[test]
fn identity_residual_converges_immediately() {
    // F(x) = x with k = 2: the starting point 0 is already optimal
    let p = RegularizedProblem::new::<f64>(LeastSquares::new(Shift(vec![0.0; 4]), 4), 2).unwrap();
    for out in [
        tr_solve(&p, &Config::default()).unwrap(),
        lmtr_solve(&p, &Config::default()).unwrap(),
    ] {
        assert!(out.converged());
        assert_eq!(out.outer_iterations, 1);
        assert!(out.records.is_empty());
        assert_eq!(out.solution, vec![0.0; 4]);
    }
}

#[test]
fn shifted_identity_keeps_largest_entries() {
    let c = vec![0.5, -3.0, 0.25, 2.0];
    let p = RegularizedProblem::new::<f64>(LeastSquares::new(Shift(c), 4), 2).unwrap();
    let out = lmtr_solve(&p, &Config::default()).unwrap();
    assert!(out.converged());
    let expected = [0.0, -3.0, 0.0, 2.0];
    for (a, b) in out.solution.iter().zip(expected) {
        assert!((a - b).abs() <= 1e-8, "{:?}", out.solution);
    }
}

#[test]
fn bad_configuration_is_rejected() {
    let inst = generate::<f64>(10, 20, 2, 0).unwrap();
    let p = inst.as_problem();
    let cfg = Config {
        gamma: 1.0,
        ..Config::default()
    };
    assert!(tr_solve(&p, &cfg).is_err());
    let cfg = Config {
        x0: Some(vec![1.0; 20]),
        ..Config::default()
    };
    assert!(lmtr_solve(&p, &cfg).is_err());
}
