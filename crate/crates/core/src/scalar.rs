//! Scalar abstractions.
//!
//! The projection and the enumeration oracle only need ordered field
//! arithmetic, so they accept any [`Scalar`], including exact rationals.
//! Everything that takes square roots, estimates norms or iterates to a
//! tolerance is written against [`Real`].

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive};

/// Ordered signed field element usable by the projection routines.
pub trait Scalar: Copy + PartialOrd + Signed + Debug + Display + Send + Sync + 'static {
    /// `false` for NaN and infinities; always `true` for exact types.
    fn is_finite_scalar(self) -> bool;

    /// Relative tolerance used when grouping tied squared distances.
    fn tie_tolerance() -> Self;

    /// Lossy conversion used for reporting.
    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f64 {
    fn is_finite_scalar(self) -> bool {
        self.is_finite()
    }
    fn tie_tolerance() -> Self {
        1e-12
    }
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn is_finite_scalar(self) -> bool {
        self.is_finite()
    }
    fn tie_tolerance() -> Self {
        1e-5
    }
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

macro_rules! exact_scalar {
    ($($int:ty),*) => {$(
        impl Scalar for Ratio<$int> {
            fn is_finite_scalar(self) -> bool {
                true
            }
            fn tie_tolerance() -> Self {
                Ratio::from_integer(0)
            }
            fn to_f64_lossy(self) -> f64 {
                self.to_f64().unwrap_or(f64::NAN)
            }
        }
    )*};
}

exact_scalar!(i32, i64, i128);

/// Floating-point scalar for the iterative parts of the crate.
pub trait Real: Scalar + Float + FromPrimitive + LowerExp + Sum {
    /// Shorthand for constants written as `f64` literals.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
