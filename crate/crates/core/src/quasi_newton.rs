//! Limited-memory BFGS and SR1 Hessian approximations.
//!
//! Both operators start from `scaling · I` and apply the retained pairs
//! `(s, g)` in order, where `g` is the gradient difference along step `s`.
//! Each pair contributes a rank-one or rank-two correction whose vectors are
//! cached, so a product costs `O(memory · n)`:
//!
//! - BFGS: `B⁺ = B − (Bs)(Bs)ᵀ/(sᵀBs) + ggᵀ/(gᵀs)`
//! - SR1:  `B⁺ = B + (g − Bs)(g − Bs)ᵀ/((g − Bs)ᵀs)`
//!
//! When the oldest pair is evicted the cached corrections are rebuilt from
//! the remaining pairs.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2, sub};
use crate::scalar::Real;

pub const DEFAULT_MEMORY: usize = 5;
/// Relative threshold of the pair acceptance tests.
pub const SKIP_TOL: f64 = 1e-8;

const POWER_MAX_ITER: usize = 100;
const POWER_RTOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiNewtonKind {
    Lbfgs,
    Lsr1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateStatus {
    Accepted,
    Rejected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvaturePair<T> {
    pub step: Vec<T>,
    pub grad_diff: Vec<T>,
}

#[derive(Debug, Clone)]
enum Correction<T> {
    /// `−bbᵀ/(sᵀb) + ggᵀ/(gᵀs)` with `b = B s`.
    Bfgs {
        bs: Vec<T>,
        s_bs: T,
        g: Vec<T>,
        g_s: T,
    },
    /// `uuᵀ/(uᵀs)` with `u = g − B s`.
    Sr1 { u: Vec<T>, u_s: T },
}

#[derive(Debug, Clone)]
pub struct QuasiNewtonOperator<T> {
    kind: QuasiNewtonKind,
    dim: usize,
    memory: usize,
    scaling: T,
    pairs: VecDeque<CurvaturePair<T>>,
    corrections: Vec<Correction<T>>,
}

impl<T: Real> QuasiNewtonOperator<T> {
    pub fn new(kind: QuasiNewtonKind, dim: usize, memory: usize) -> Result<Self> {
        Self::with_scaling(kind, dim, memory, T::one())
    }

    pub fn with_scaling(
        kind: QuasiNewtonKind,
        dim: usize,
        memory: usize,
        scaling: T,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        if memory == 0 {
            return Err(Error::InvalidConfig(
                "quasi-Newton memory must be positive".into(),
            ));
        }
        if !(scaling > T::zero()) || !scaling.is_finite() {
            return Err(Error::InvalidConfig(
                "quasi-Newton scaling must be positive".into(),
            ));
        }
        Ok(Self {
            kind,
            dim,
            memory,
            scaling,
            pairs: VecDeque::with_capacity(memory),
            corrections: Vec::with_capacity(memory),
        })
    }

    pub fn kind(&self) -> QuasiNewtonKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn scaling(&self) -> T {
        self.scaling
    }

    /// Retained pairs, oldest first.
    pub fn pairs(&self) -> impl Iterator<Item = &CurvaturePair<T>> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn check_dim(&self, v: &[T]) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            })
        }
    }

    /// Product with the first `count` corrections only.
    fn apply_prefix(&self, v: &[T], count: usize) -> Vec<T> {
        let mut out: Vec<T> = v.iter().map(|&vi| self.scaling * vi).collect();
        for c in &self.corrections[..count] {
            match c {
                Correction::Bfgs { bs, s_bs, g, g_s } => {
                    axpy(-dot(bs, v) / *s_bs, bs, &mut out);
                    axpy(dot(g, v) / *g_s, g, &mut out);
                }
                Correction::Sr1 { u, u_s } => {
                    axpy(dot(u, v) / *u_s, u, &mut out);
                }
            }
        }
        out
    }

    /// Correction for `pair` on top of the current corrections, or `None`
    /// when the skip rule rejects it.
    fn correction_for(&self, step: &[T], grad_diff: &[T]) -> Option<Correction<T>> {
        let tol = T::c(SKIP_TOL);
        let bs = self.apply_prefix(step, self.corrections.len());
        match self.kind {
            QuasiNewtonKind::Lbfgs => {
                let g_s = dot(grad_diff, step);
                if !(g_s > tol * norm2(step) * norm2(grad_diff)) {
                    return None;
                }
                let s_bs = dot(step, &bs);
                if !(s_bs > T::zero()) {
                    return None;
                }
                Some(Correction::Bfgs {
                    bs,
                    s_bs,
                    g: grad_diff.to_vec(),
                    g_s,
                })
            }
            QuasiNewtonKind::Lsr1 => {
                let u = sub(grad_diff, &bs);
                let u_s = dot(&u, step);
                if !(u_s.abs() > tol * norm2(step) * norm2(&u)) {
                    return None;
                }
                Some(Correction::Sr1 { u, u_s })
            }
        }
    }

    /// Adds the pair `(step, grad_diff)` unless the skip rule rejects it,
    /// evicting the oldest pair when the memory is full.
    ///
    /// L-BFGS rejects `sᵀg ≤ 1e-8‖s‖‖g‖`; L-SR1 rejects
    /// `|sᵀ(g − Bs)| ≤ 1e-8‖s‖‖g − Bs‖`.
    pub fn update(&mut self, step: &[T], grad_diff: &[T]) -> Result<UpdateStatus> {
        self.check_dim(step)?;
        self.check_dim(grad_diff)?;
        if step.iter().chain(grad_diff).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "curvature pair",
            });
        }
        let Some(correction) = self.correction_for(step, grad_diff) else {
            return Ok(UpdateStatus::Rejected);
        };
        let pair = CurvaturePair {
            step: step.to_vec(),
            grad_diff: grad_diff.to_vec(),
        };
        if self.pairs.len() == self.memory {
            self.pairs.pop_front();
            self.pairs.push_back(pair);
            self.rebuild();
        } else {
            self.pairs.push_back(pair);
            self.corrections.push(correction);
        }
        Ok(UpdateStatus::Accepted)
    }

    fn rebuild(&mut self) {
        self.corrections.clear();
        let pairs: Vec<_> = self.pairs.drain(..).collect();
        for pair in pairs {
            if let Some(c) = self.correction_for(&pair.step, &pair.grad_diff) {
                self.corrections.push(c);
                self.pairs.push_back(pair);
            }
        }
    }

    /// `B v`
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_dim(v)?;
        Ok(self.apply_prefix(v, self.corrections.len()))
    }

    /// Spectral norm by power iteration: stops when two successive estimates
    /// agree to `1e-4` relative, or after 100 iterations.
    pub fn norm_estimate(&self) -> T {
        if self.corrections.is_empty() {
            return self.scaling;
        }
        let n = self.dim;
        // fixed, non-symmetric start so no eigenvector is systematically missed
        let mut v: Vec<T> = (0..n)
            .map(|i| T::one() + T::c(0.5) * T::c(((i * 7919) % 1009) as f64 / 1009.0))
            .collect();
        let nv = norm2(&v);
        v.iter_mut().for_each(|x| *x = *x / nv);
        let mut estimate = T::zero();
        for _ in 0..POWER_MAX_ITER {
            let bv = self.apply_prefix(&v, self.corrections.len());
            let next = norm2(&bv);
            if next.is_zero() {
                return T::zero();
            }
            let converged = (next - estimate).abs() <= T::c(POWER_RTOL) * next;
            estimate = next;
            v = bv.into_iter().map(|x| x / next).collect();
            if converged {
                break;
            }
        }
        estimate
    }
}
