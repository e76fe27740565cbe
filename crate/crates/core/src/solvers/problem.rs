use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::projection::count_nonzeros;
use crate::scalar::Real;

/// Smooth part `f` of the objective.
pub trait Smooth<T> {
    fn dim(&self) -> usize;
    fn value(&self, x: &[T]) -> T;
    fn gradient(&self, x: &[T]) -> Vec<T>;
}

/// Residual `F: ℝⁿ → ℝᵐ` with Jacobian products, for `f = ½‖F‖²`.
pub trait Residual<T> {
    fn residual_dim(&self) -> usize;
    fn residual(&self, x: &[T]) -> Vec<T>;
    /// `J(x) v`
    fn jacobian_product(&self, x: &[T], v: &[T]) -> Vec<T>;
    /// `J(x)ᵀ u`
    fn jacobian_transpose_product(&self, x: &[T], u: &[T]) -> Vec<T>;
}

/// Turns a residual into the smooth term `½‖F(x)‖²`.
#[derive(Debug, Clone)]
pub struct LeastSquares<R> {
    pub residual: R,
    pub dim: usize,
}

impl<R> LeastSquares<R> {
    pub fn new(residual: R, dim: usize) -> Self {
        Self { residual, dim }
    }
}

impl<T: Real, R: Residual<T>> Smooth<T> for LeastSquares<R> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[T]) -> T {
        let r = self.residual.residual(x);
        T::c(0.5) * dot(&r, &r)
    }
    fn gradient(&self, x: &[T]) -> Vec<T> {
        let r = self.residual.residual(x);
        self.residual.jacobian_transpose_product(x, &r)
    }
}

impl<T: Real, R: Residual<T>> Residual<T> for LeastSquares<R> {
    fn residual_dim(&self) -> usize {
        self.residual.residual_dim()
    }
    fn residual(&self, x: &[T]) -> Vec<T> {
        self.residual.residual(x)
    }
    fn jacobian_product(&self, x: &[T], v: &[T]) -> Vec<T> {
        self.residual.jacobian_product(x, v)
    }
    fn jacobian_transpose_product(&self, x: &[T], u: &[T]) -> Vec<T> {
        self.residual.jacobian_transpose_product(x, u)
    }
}

/// `f(x) + h(x)` with `h = χ(· | kB₀)`.
#[derive(Debug, Clone)]
pub struct RegularizedProblem<P> {
    pub smooth: P,
    pub sparsity: usize,
}

impl<P> RegularizedProblem<P> {
    pub fn new<T>(smooth: P, sparsity: usize) -> Result<Self>
    where
        T: Real,
        P: Smooth<T>,
    {
        let dim = smooth.dim();
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        if sparsity > dim {
            return Err(Error::SparsityOutOfRange { k: sparsity, dim });
        }
        Ok(Self { smooth, sparsity })
    }

    /// `0` on `kB₀`, `+∞` elsewhere.
    pub fn nonsmooth_value<T: Real>(&self, x: &[T]) -> T {
        if count_nonzeros(x) <= self.sparsity {
            T::zero()
        } else {
            T::infinity()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn least_squares_adaptor() {
        let ls = LeastSquares::new(Shift(vec![1.0, 2.0]), 2);
        assert_eq!(ls.value(&[0.0, 0.0]), 2.5);
        assert_eq!(ls.gradient(&[0.0, 0.0]), vec![-1.0, -2.0]);
    }

    #[test]
    fn indicator() {
        let p = RegularizedProblem::new(LeastSquares::new(Shift(vec![0.0; 3]), 3), 1).unwrap();
        assert_eq!(p.nonsmooth_value(&[0.0, 1.0, 0.0]), 0.0);
        assert_eq!(p.nonsmooth_value(&[1.0, 1.0, 0.0]), f64::INFINITY);
        assert!(RegularizedProblem::new(LeastSquares::new(Shift(vec![0.0]), 1), 2).is_err());
    }
}
