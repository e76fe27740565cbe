//! Euclidean projection onto `kB₀ ∩ (x + ΔB∞)`, the set of vectors with at
//! most `k` nonzeros lying in an ℓ∞ box, together with an exhaustive oracle,
//! optimality checkers, limited-memory quasi-Newton operators and trust-region
//! solvers for sparsity-constrained problems.
//!
//! Everything is generic over the scalar type. The projection and the oracle
//! only need ordered field arithmetic and work with exact rationals; the
//! checkers and solvers need floating point. The aliases below fix `f64`.
//!
//! ```
//! use sparsebox::{project_intersection, Region};
//!
//! let region = Region::new(vec![0.0, -1.0], 2.0, 1).unwrap();
//! let p = project_intersection(&[2.0, 3.0], &region).unwrap();
//! assert_eq!(p.point, vec![0.0, 1.0]);
//! assert_eq!(p.sq_distance, 8.0);
//! ```

// `!(a >= b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bpdn;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod projection;
pub mod quasi_newton;
pub mod scalar;
pub mod solvers;
pub mod stationarity;
pub mod validation;

pub use bpdn::{generate, generate_with_noise, BpdnInstance, BpdnObjective};
pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use oracle::{enumerate_projection, Minimizer, OracleResult};
pub use projection::{
    classify_support, count_nonzeros, membership, project_box, project_intersection, project_piece,
    project_sparse, squared_distance, ProjectionResult, Projector, SparseBoxRegion, SupportSplit,
};
pub use quasi_newton::{CurvaturePair, QuasiNewtonKind, QuasiNewtonOperator, UpdateStatus};
pub use scalar::{Real, Scalar};
pub use solvers::{lmtr_solve, tr_solve, IterationRecord, SolveOutcome, SolverConfig, Termination};
pub use stationarity::{
    is_basic_feasible, is_cw_minimum, is_l_stationary, m_k, stationarity_report, StationarityReport,
};

use num_rational::Rational64;

pub type Region = SparseBoxRegion<f64>;
pub type ExactRegion = SparseBoxRegion<Rational64>;
pub type Projection = ProjectionResult<f64>;
pub type Operator = QuasiNewtonOperator<f64>;
pub type Instance = BpdnInstance<f64>;
pub type Config = SolverConfig<f64>;
pub type Outcome = SolveOutcome<f64>;
