//! Trust-region methods for `min f(x) + χ(x | kB₀)`.
//!
//! Both outer loops build a quadratic model of `f` around the iterate and
//! compute a step with [`r2_subsolve`], a proximal-gradient method with
//! adaptive regularization whose proximal step is the sparse-box
//! projection. [`tr_solve`] models curvature with a limited-memory
//! quasi-Newton operator, [`lmtr_solve`] with the Gauss–Newton matrix
//! `JᵀJ` of a least-squares residual.

mod problem;
mod r2;
mod trust_region;

pub use problem::{LeastSquares, RegularizedProblem, Residual, Smooth};
pub use r2::{r2_subsolve, QuadraticModel, R2Output, R2Settings};
pub use trust_region::{lmtr_solve, tr_solve};

use crate::error::{Error, Result};
use crate::quasi_newton::{QuasiNewtonKind, DEFAULT_MEMORY};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    /// Stopping tolerance `ε` in `√ξ₁ ≤ ε + ε√ξ₁,₀`.
    pub epsilon: T,
    pub max_outer: usize,
    pub max_inner: usize,
    pub delta_init: T,
    /// Step acceptance threshold on `ρ`.
    pub eta1: T,
    /// Radius increase threshold on `ρ`.
    pub eta2: T,
    /// Factor for the trust-region radius and the R2 regularization.
    pub gamma: T,
    pub sigma_min: T,
    pub quasi_newton: QuasiNewtonKind,
    pub memory: usize,
    /// Starting point, `0` when absent.
    pub x0: Option<Vec<T>>,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            epsilon: T::c(1e-6),
            max_outer: 500,
            max_inner: 1000,
            delta_init: T::one(),
            eta1: T::c(0.1),
            eta2: T::c(0.9),
            gamma: T::c(3.0),
            sigma_min: T::c(1e-8),
            quasi_newton: QuasiNewtonKind::Lsr1,
            memory: DEFAULT_MEMORY,
            x0: None,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.epsilon > T::zero()) {
            return bad("epsilon must be positive");
        }
        if !(T::zero() < self.eta1 && self.eta1 <= self.eta2 && self.eta2 < T::one()) {
            return bad("need 0 < eta1 <= eta2 < 1");
        }
        if !(self.gamma > T::one()) {
            return bad("gamma must exceed 1");
        }
        if !(self.delta_init > T::zero()) || !self.delta_init.is_finite() {
            return bad("initial radius must be positive");
        }
        if !(self.sigma_min > T::zero()) {
            return bad("sigma_min must be positive");
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return bad("iteration limits must be positive");
        }
        if self.memory == 0 {
            return bad("memory must be positive");
        }
        Ok(())
    }
}

/// One row of the solver log.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<T> {
    pub outer: usize,
    pub inner: usize,
    pub f: T,
    pub h: T,
    pub sqrt_xi1: T,
    pub sqrt_xi: T,
    pub rho: T,
    pub delta: T,
    /// `‖x‖∞` before the step.
    pub norm_x: T,
    /// `‖s‖∞`
    pub norm_s: T,
    /// `‖B‖` for TR, the initial R2 regularization `σ₁ = 1/ν` for LMTR.
    pub curvature: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination<T> {
    /// `√ξ₁` fell below `ε + ε√ξ₁,₀`; carries that `ξ₁`.
    Converged {
        xi1: T,
    },
    /// Model decrease of the step was negligible relative to `f`.
    SmallModelDecrease {
        xi: T,
    },
    MaxOuter,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvaluationCounts {
    pub objective: usize,
    pub gradient: usize,
    pub residual: usize,
    pub jacobian: usize,
    pub jacobian_transpose: usize,
}

/// Objective value after a given number of gradient (TR) or residual
/// (LMTR) evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryPoint<T> {
    pub evaluations: usize,
    pub objective: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome<T> {
    pub solution: Vec<T>,
    pub objective: T,
    pub termination: Termination<T>,
    /// Outer iterations performed, including the one that detected
    /// convergence.
    pub outer_iterations: usize,
    pub records: Vec<IterationRecord<T>>,
    pub evaluations: EvaluationCounts,
    pub history: Vec<HistoryPoint<T>>,
    /// Accepted steps in order.
    pub accepted_steps: Vec<Vec<T>>,
    /// `ξ₁` at the first outer iteration.
    pub xi1_initial: T,
    /// `ξ₁` at the last outer iteration.
    pub xi1_final: T,
}

impl<T: Real> SolveOutcome<T> {
    pub fn converged(&self) -> bool {
        matches!(self.termination, Termination::Converged { .. })
    }

    /// `(ε + ε√ξ₁,₀)²`, the bound the final `ξ₁` is compared against.
    pub fn stopping_threshold_sq(&self, epsilon: T) -> T {
        let t = epsilon + epsilon * self.xi1_initial.sqrt();
        t * t
    }
}
