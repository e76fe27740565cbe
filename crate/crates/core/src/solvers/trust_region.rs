use super::r2::{r2_subsolve, QuadraticModel, R2Settings};
use super::{
    EvaluationCounts, HistoryPoint, IterationRecord, RegularizedProblem, Residual, Smooth,
    SolveOutcome, SolverConfig, Termination,
};
use crate::error::{Error, Result};
use crate::linalg::{add, dot, norm_inf, sub};
use crate::projection::{count_nonzeros, SparseBoxRegion};
use crate::quasi_newton::QuasiNewtonOperator;
use crate::scalar::Real;

/// What the outer loop needs from a model family.
trait ModelFamily<T: Real> {
    fn objective(&self) -> T;
    /// Builds the model at the current point and runs R2 on it.
    fn step(
        &mut self,
        region: &SparseBoxRegion<T>,
        settings: &R2Settings<T>,
        stop: &mut dyn FnMut(T) -> bool,
    ) -> Result<StepOutcome<T>>;
    /// Initial regularization and the value shown in the curvature column.
    fn sigma_and_curvature(&self) -> (T, T);
    /// Evaluates the trial point; returns actual decrease `f(x) − f(x + s)`.
    fn trial(&mut self, x: &[T], step: &[T]) -> Result<T>;
    /// Moves to the last trial point.
    fn accept(&mut self, x_new: &[T], step: &[T]) -> Result<()>;
    fn history_counter(&self) -> usize;
    fn counts(&self) -> EvaluationCounts;
}

struct StepOutcome<T> {
    step: Vec<T>,
    xi1: T,
    xi: T,
    inner: usize,
    critical: bool,
}

fn starting_point<T: Real>(config: &SolverConfig<T>, dim: usize, k: usize) -> Result<Vec<T>> {
    let x = config.x0.clone().unwrap_or_else(|| vec![T::zero(); dim]);
    if x.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "starting point",
        });
    }
    if count_nonzeros(&x) > k {
        return Err(Error::Infeasible);
    }
    Ok(x)
}

fn outer_loop<T: Real, M: ModelFamily<T>>(
    family: &mut M,
    mut x: Vec<T>,
    sparsity: usize,
    config: &SolverConfig<T>,
) -> Result<SolveOutcome<T>> {
    let eps = config.epsilon;
    let mut delta = config.delta_init;
    let mut records = Vec::new();
    let mut history = vec![HistoryPoint {
        evaluations: family.history_counter(),
        objective: family.objective(),
    }];
    let mut accepted_steps = Vec::new();
    let mut xi1_initial: Option<T> = None;
    let mut xi1_final = T::zero();
    let mut termination = Termination::MaxOuter;
    let mut outer_iterations = 0;

    for outer in 1..=config.max_outer {
        outer_iterations = outer;
        let f = family.objective();
        let (sigma, curvature) = family.sigma_and_curvature();
        let settings = R2Settings {
            sigma,
            sigma_min: config.sigma_min,
            gamma: config.gamma,
            eta1: config.eta1,
            epsilon: eps,
            max_inner: config.max_inner,
        };
        let region = SparseBoxRegion::new(x.clone(), delta, sparsity)?;
        let mut stop = |xi1: T| {
            let base = *xi1_initial.get_or_insert(xi1);
            xi1.sqrt() <= eps + eps * base.sqrt()
        };
        let out = family.step(&region, &settings, &mut stop)?;
        xi1_final = out.xi1;
        if out.critical {
            termination = Termination::Converged { xi1: out.xi1 };
            break;
        }
        if out.xi <= T::c(1e-16) * f.abs().max(T::one()) {
            termination = Termination::SmallModelDecrease { xi: out.xi };
            break;
        }

        let actual = family.trial(&x, &out.step)?;
        let rho = actual / out.xi;
        let norm_s = norm_inf(&out.step);
        records.push(IterationRecord {
            outer,
            inner: out.inner,
            f,
            h: if count_nonzeros(&x) <= sparsity {
                T::zero()
            } else {
                T::infinity()
            },
            sqrt_xi1: out.xi1.sqrt(),
            sqrt_xi: out.xi.sqrt(),
            rho,
            delta,
            norm_x: norm_inf(&x),
            norm_s,
            curvature,
        });

        if rho >= config.eta1 {
            let x_new = add(&x, &out.step);
            family.accept(&x_new, &out.step)?;
            x = x_new;
            accepted_steps.push(out.step);
            history.push(HistoryPoint {
                evaluations: family.history_counter(),
                objective: family.objective(),
            });
        }

        let box_active = norm_s >= delta * (T::one() - T::c(1e-8));
        if rho >= config.eta2 && box_active {
            delta = delta * config.gamma;
        } else if rho < config.eta1 {
            delta = delta / T::c(2.0);
        }
    }

    Ok(SolveOutcome {
        solution: x,
        objective: family.objective(),
        termination,
        outer_iterations,
        records,
        evaluations: family.counts(),
        history,
        accepted_steps,
        xi1_initial: xi1_initial.unwrap_or(T::zero()),
        xi1_final,
    })
}

struct QuasiNewtonFamily<'a, T, P> {
    smooth: &'a P,
    op: QuasiNewtonOperator<T>,
    f: T,
    grad: Vec<T>,
    trial_f: T,
    counts: EvaluationCounts,
}

impl<'a, T: Real, P: Smooth<T>> ModelFamily<T> for QuasiNewtonFamily<'a, T, P> {
    fn objective(&self) -> T {
        self.f
    }

    fn sigma_and_curvature(&self) -> (T, T) {
        let norm = self.op.norm_estimate();
        (norm.max(T::one()), norm)
    }

    fn step(
        &mut self,
        region: &SparseBoxRegion<T>,
        settings: &R2Settings<T>,
        stop: &mut dyn FnMut(T) -> bool,
    ) -> Result<StepOutcome<T>> {
        let op = &self.op;
        let mut model = QuadraticModel::new(self.grad.clone(), |v: &[T]| {
            op.apply(v).expect("operator dimension matches model")
        });
        let out = r2_subsolve(&mut model, region, settings, stop)?;
        Ok(StepOutcome {
            step: out.step,
            xi1: out.xi1,
            xi: out.xi,
            inner: out.inner,
            critical: out.critical,
        })
    }

    fn trial(&mut self, x: &[T], step: &[T]) -> Result<T> {
        let x_new = add(x, step);
        self.counts.objective += 1;
        self.trial_f = self.smooth.value(&x_new);
        if !self.trial_f.is_finite() {
            // treated as a failed step
            return Ok(T::neg_infinity());
        }
        Ok(self.f - self.trial_f)
    }

    fn accept(&mut self, x_new: &[T], step: &[T]) -> Result<()> {
        self.counts.gradient += 1;
        let grad_new = self.smooth.gradient(x_new);
        if grad_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteObjective);
        }
        self.op.update(step, &sub(&grad_new, &self.grad))?;
        self.grad = grad_new;
        self.f = self.trial_f;
        Ok(())
    }

    fn history_counter(&self) -> usize {
        self.counts.gradient
    }

    fn counts(&self) -> EvaluationCounts {
        self.counts
    }
}

/// Trust-region method with a limited-memory quasi-Newton model
/// `q(s) = ∇f(x)ᵀs + ½ sᵀBs`.
///
/// Every iterate stays in `kB₀`. A step is accepted when
/// `ρ = (f(x) − f(x + s)) / ξ ≥ eta1`; the radius grows by `gamma` when
/// `ρ ≥ eta2` and the step reaches the boundary, and is halved when the
/// step is rejected. The quasi-Newton pair is updated on accepted steps.
/// The solve ends when `√ξ₁ ≤ ε + ε√ξ₁,₀`, where `ξ₁,₀` is the first
/// outer iteration's `ξ₁`.
pub fn tr_solve<T: Real, P: Smooth<T>>(
    problem: &RegularizedProblem<P>,
    config: &SolverConfig<T>,
) -> Result<SolveOutcome<T>> {
    config.validate()?;
    let smooth = &problem.smooth;
    let n = smooth.dim();
    let x = starting_point(config, n, problem.sparsity)?;
    let mut counts = EvaluationCounts {
        objective: 1,
        gradient: 1,
        ..Default::default()
    };
    let f = smooth.value(&x);
    let grad = smooth.gradient(&x);
    if !f.is_finite() || grad.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteObjective);
    }
    counts.objective = 1;
    let mut family = QuasiNewtonFamily {
        smooth,
        op: QuasiNewtonOperator::new(config.quasi_newton, n, config.memory)?,
        f,
        grad,
        trial_f: f,
        counts,
    };
    outer_loop(&mut family, x, problem.sparsity, config)
}

struct GaussNewtonFamily<'a, T, P> {
    residual: &'a P,
    x: Vec<T>,
    f: T,
    r: Vec<T>,
    trial_r: Vec<T>,
    counts: EvaluationCounts,
}

fn half_sq<T: Real>(v: &[T]) -> T {
    T::c(0.5) * dot(v, v)
}

impl<'a, T: Real, P: Residual<T>> ModelFamily<T> for GaussNewtonFamily<'a, T, P> {
    fn objective(&self) -> T {
        self.f
    }

    fn sigma_and_curvature(&self) -> (T, T) {
        (T::one(), T::one())
    }

    fn step(
        &mut self,
        region: &SparseBoxRegion<T>,
        settings: &R2Settings<T>,
        stop: &mut dyn FnMut(T) -> bool,
    ) -> Result<StepOutcome<T>> {
        let residual = self.residual;
        let x = &self.x;
        self.counts.jacobian_transpose += 1;
        let grad = residual.jacobian_transpose_product(x, &self.r);
        let mut model = QuadraticModel::new(grad.clone(), |v: &[T]| {
            let jv = residual.jacobian_product(x, v);
            residual.jacobian_transpose_product(x, &jv)
        });
        let out = r2_subsolve(&mut model, region, settings, stop)?;
        self.counts.jacobian += model.products();
        self.counts.jacobian_transpose += model.products();

        let xi = if out.critical {
            T::zero()
        } else {
            // ξ = −(Fᵀ(Js) + ½‖Js‖²), recomputed for accuracy
            self.counts.jacobian += 1;
            let js = residual.jacobian_product(x, &out.step);
            -(dot(&self.r, &js) + half_sq(&js))
        };
        Ok(StepOutcome {
            step: out.step,
            xi1: out.xi1,
            xi,
            inner: out.inner,
            critical: out.critical,
        })
    }

    fn trial(&mut self, x: &[T], step: &[T]) -> Result<T> {
        let x_new = add(x, step);
        self.counts.residual += 1;
        self.trial_r = self.residual.residual(&x_new);
        if self.trial_r.iter().any(|v| !v.is_finite()) {
            return Ok(T::neg_infinity());
        }
        // ½(‖F‖² − ‖F⁺‖²) as ½(F − F⁺)ᵀ(F + F⁺)
        let actual = self
            .r
            .iter()
            .zip(&self.trial_r)
            .map(|(&a, &b)| (a - b) * (a + b))
            .sum::<T>()
            * T::c(0.5);
        Ok(actual)
    }

    fn accept(&mut self, x_new: &[T], _step: &[T]) -> Result<()> {
        self.x = x_new.to_vec();
        self.r = std::mem::take(&mut self.trial_r);
        self.f = half_sq(&self.r);
        Ok(())
    }

    fn history_counter(&self) -> usize {
        self.counts.residual
    }

    fn counts(&self) -> EvaluationCounts {
        self.counts
    }
}

/// Trust-region method with the Gauss–Newton model
/// `q(s) = ½‖J(x)s + F(x)‖² − ½‖F(x)‖²` for `f = ½‖F‖²`.
///
/// Same outer loop as [`tr_solve`]; each R2 iteration costs one product
/// with `J` and one with `Jᵀ`, and `σ₁ = 1` at every outer iteration.
pub fn lmtr_solve<T: Real, P: Smooth<T> + Residual<T>>(
    problem: &RegularizedProblem<P>,
    config: &SolverConfig<T>,
) -> Result<SolveOutcome<T>> {
    config.validate()?;
    let residual = &problem.smooth;
    let n = residual.dim();
    let x = starting_point(config, n, problem.sparsity)?;
    let r = residual.residual(&x);
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteObjective);
    }
    let mut family = GaussNewtonFamily {
        residual,
        x: x.clone(),
        f: half_sq(&r),
        r,
        trial_r: Vec::new(),
        counts: EvaluationCounts {
            residual: 1,
            ..Default::default()
        },
    };
    outer_loop(&mut family, x, problem.sparsity, config)
}
