use crate::error::{Error, Result};
use crate::linalg::{add, dot};
use crate::projection::{Projector, SparseBoxRegion};
use crate::scalar::Real;

type Curvature<'a, T> = Box<dyn FnMut(&[T]) -> Vec<T> + 'a>;

/// `q(s) = gᵀs + ½ sᵀHs`, with `H` available through products only.
pub struct QuadraticModel<'a, T> {
    gradient: Vec<T>,
    curvature: Curvature<'a, T>,
    products: usize,
}

impl<'a, T: Real> QuadraticModel<'a, T> {
    pub fn new(gradient: Vec<T>, curvature: impl FnMut(&[T]) -> Vec<T> + 'a) -> Self {
        Self {
            gradient,
            curvature: Box::new(curvature),
            products: 0,
        }
    }

    /// `∇q(0)`
    pub fn gradient(&self) -> &[T] {
        &self.gradient
    }

    pub fn hessian_product(&mut self, v: &[T]) -> Vec<T> {
        self.products += 1;
        (self.curvature)(v)
    }

    /// Number of `H v` products so far.
    pub fn products(&self) -> usize {
        self.products
    }

    pub fn value(&mut self, s: &[T]) -> T {
        let hs = self.hessian_product(s);
        dot(&self.gradient, s) + T::c(0.5) * dot(s, &hs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R2Settings<T> {
    /// Initial regularization `σ₁`.
    pub sigma: T,
    pub sigma_min: T,
    pub gamma: T,
    /// Inner step acceptance threshold.
    pub eta1: T,
    pub epsilon: T,
    pub max_inner: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct R2Output<T> {
    pub step: Vec<T>,
    /// Regularized model decrease of the first inner step.
    pub xi1: T,
    /// `q(0) − q(step)`
    pub xi: T,
    /// Number of proximal steps computed.
    pub inner: usize,
    /// `true` when `stop_on_xi1` accepted `ξ₁` and no step was taken.
    pub critical: bool,
}

/// Proximal gradient with adaptive regularization on
/// `q(s) + χ(x + s | kB₀) + χ(s | ΔB∞)`.
///
/// Each inner iteration solves
/// `min_t ∇q(s)ᵀt + ½σ‖t‖² + χ(x + s + t | C)` exactly: with
/// `y = x + s + t` this is the projection of `x + s − ∇q(s)/σ` onto
/// `C = kB₀ ∩ (x + ΔB∞)`. The decrease of that regularized linear model is
/// `ξ_l = −(∇q(s)ᵀt + ½σ‖t‖²) ≥ 0`; the first one is `ξ₁`. A step is
/// accepted when `q` decreases by at least `eta1·ξ_l`, after which `σ` is
/// divided by `gamma` (down to `sigma_min`); otherwise `σ` is multiplied by
/// `gamma`. The loop ends once `√ξ_l ≤ max(ε, 1e-2√ξ₁)`.
///
/// `stop_on_xi1` sees `ξ₁` before anything else happens and may end the
/// call right there, which the outer loops use for their stopping test.
pub fn r2_subsolve<T: Real>(
    model: &mut QuadraticModel<'_, T>,
    region: &SparseBoxRegion<T>,
    settings: &R2Settings<T>,
    stop_on_xi1: impl FnOnce(T) -> bool,
) -> Result<R2Output<T>> {
    if !(region.radius() > T::zero()) {
        return Err(Error::InvalidRadius);
    }
    let n = region.dim();
    if model.gradient.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: model.gradient.len(),
        });
    }
    let half = T::c(0.5);
    let x = region.center().to_vec();
    let mut sigma = settings.sigma;
    let mut s = vec![T::zero(); n];
    let mut hs = vec![T::zero(); n];
    let mut q = T::zero();
    let mut xi1 = T::zero();
    let mut eps_inner = settings.epsilon;
    let mut stop_on_xi1 = Some(stop_on_xi1);
    let mut projector = Projector::new();

    let mut inner = 0;
    while inner < settings.max_inner {
        inner += 1;
        let grad = add(&model.gradient, &hs);
        let w: Vec<T> = (0..n).map(|i| x[i] + s[i] - grad[i] / sigma).collect();
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteObjective);
        }
        projector.project(&w, region)?;
        let y = projector.point();
        let t: Vec<T> = (0..n).map(|i| y[i] - x[i] - s[i]).collect();
        let t_sq = dot(&t, &t);
        let xi_l = (-(dot(&grad, &t) + half * sigma * t_sq)).max(T::zero());

        if inner == 1 {
            xi1 = xi_l;
            if let Some(stop) = stop_on_xi1.take() {
                if stop(xi1) {
                    return Ok(R2Output {
                        step: s,
                        xi1,
                        xi: T::zero(),
                        inner,
                        critical: true,
                    });
                }
            }
            eps_inner = settings.epsilon.max(T::c(1e-2) * xi1.sqrt());
        } else if xi_l.sqrt() <= eps_inner {
            break;
        }
        if xi_l.is_zero() {
            break;
        }

        let ht = model.hessian_product(&t);
        let q_new = q + dot(&grad, &t) + half * dot(&t, &ht);
        if !q_new.is_finite() {
            return Err(Error::NonFiniteObjective);
        }
        let ratio = (q - q_new) / xi_l;
        if ratio >= settings.eta1 {
            // s is rebuilt from y so that x + s lands exactly on the
            // projection output (exact zeros stay exact)
            for i in 0..n {
                s[i] = y[i] - x[i];
                hs[i] = hs[i] + ht[i];
            }
            q = q_new;
            sigma = (sigma / settings.gamma).max(settings.sigma_min);
        } else {
            sigma = sigma * settings.gamma;
        }
    }

    Ok(R2Output {
        step: s,
        xi1,
        xi: -q,
        inner,
        critical: false,
    })
}
