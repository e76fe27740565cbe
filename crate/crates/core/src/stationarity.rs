//! Necessary optimality conditions for `min ½‖w − y‖₂²` over the sparse box.
//!
//! These are checkers, used to assert properties of projection outputs and
//! solver iterates. None of them is needed to compute the projection.

use std::fmt;

use crate::error::{Error, Result};
use crate::projection::{count_nonzeros, membership, project_intersection, SparseBoxRegion};
use crate::scalar::Real;

/// Default absolute tolerance on condition residuals.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Relative tolerance of the fixed-point distance test.
pub const L_STATIONARY_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `y_i` at the upper face but `y_i > w_i`.
    UpperFace,
    /// `y_i` at the lower face but `y_i < w_i`.
    LowerFace,
    /// interior coordinate with `y_i ≠ w_i`.
    Interior,
    /// projected gradient step moves away from `y`.
    FixedPoint,
    /// a single-coordinate move or swap decreases the objective.
    CoordinateMove,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::UpperFace => "upper-face sign",
            Condition::LowerFace => "lower-face sign",
            Condition::Interior => "interior equality",
            Condition::FixedPoint => "fixed point",
            Condition::CoordinateMove => "coordinate move",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation<T> {
    pub index: usize,
    pub condition: Condition,
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarityReport<T> {
    pub basic_feasible: bool,
    pub l_stationary_fixed_point: bool,
    pub cw_minimum: bool,
    pub violations: Vec<Violation<T>>,
}

impl<T: Real> StationarityReport<T> {
    pub fn all_pass(&self) -> bool {
        self.basic_feasible && self.l_stationary_fixed_point && self.cw_minimum
    }
}

fn boundary_tol<T: Real>(region: &SparseBoxRegion<T>) -> T {
    T::c(1e-12) * region.radius().max(T::one())
}

fn ensure_member<T: Real>(y: &[T], w: &[T], region: &SparseBoxRegion<T>) -> Result<()> {
    for v in [y, w] {
        if v.len() != region.dim() {
            return Err(Error::DimensionMismatch {
                expected: region.dim(),
                found: v.len(),
            });
        }
    }
    if !membership(y, region, boundary_tol(region)) {
        return Err(Error::Infeasible);
    }
    Ok(())
}

/// Sign conditions of a basic feasible point, one violation per failing index.
pub fn basic_feasibility_violations<T: Real>(
    y: &[T],
    w: &[T],
    region: &SparseBoxRegion<T>,
    tol: T,
) -> Result<Vec<Violation<T>>> {
    ensure_member(y, w, region)?;
    let full = count_nonzeros(y) < region.sparsity();
    let btol = boundary_tol(region);
    let x = region.center();
    let delta = region.radius();
    let mut out = Vec::new();
    for i in 0..y.len() {
        if !full && y[i].is_zero() {
            continue;
        }
        let upper = (y[i] - (x[i] + delta)).abs() <= btol;
        let lower = (y[i] - (x[i] - delta)).abs() <= btol;
        if upper && lower {
            // degenerate box: y_i is pinned and any w_i is consistent
            continue;
        }
        let (condition, residual) = if upper {
            (Condition::UpperFace, y[i] - w[i])
        } else if lower {
            (Condition::LowerFace, w[i] - y[i])
        } else {
            (Condition::Interior, (y[i] - w[i]).abs())
        };
        if residual > tol {
            out.push(Violation {
                index: i,
                condition,
                residual,
            });
        }
    }
    Ok(out)
}

/// First-order sign conditions: all indices when `‖y‖₀ < k`, only the
/// support when `‖y‖₀ = k`.
pub fn is_basic_feasible<T: Real>(
    y: &[T],
    w: &[T],
    region: &SparseBoxRegion<T>,
    tol: T,
) -> Result<bool> {
    Ok(basic_feasibility_violations(y, w, region, tol)?.is_empty())
}

/// Fixed-point residual `‖v − p(v)‖² − ‖v − y‖²` relative to `‖v − y‖²`,
/// where `v = y − (y − w)/L`. Nonpositive (up to rounding) at L-stationary
/// points.
fn fixed_point_gap<T: Real>(y: &[T], w: &[T], region: &SparseBoxRegion<T>, l: T) -> Result<T> {
    if !(l > T::zero()) {
        return Err(Error::InvalidConfig("L must be positive".into()));
    }
    ensure_member(y, w, region)?;
    let v: Vec<T> = y
        .iter()
        .zip(w)
        .map(|(&yi, &wi)| yi - (yi - wi) / l)
        .collect();
    let projected = project_intersection(&v, region)?;
    let own: T = v
        .iter()
        .zip(y)
        .map(|(&vi, &yi)| (vi - yi) * (vi - yi))
        .sum();
    let scale = own.max(projected.sq_distance).max(T::min_positive_value());
    Ok((own - projected.sq_distance) / scale)
}

/// `y ∈ proj(y − L⁻¹(y − w) | C)`, tested by comparing distances so that
/// ties in the projection set do not matter.
pub fn is_l_stationary<T: Real>(
    y: &[T],
    w: &[T],
    region: &SparseBoxRegion<T>,
    l: T,
) -> Result<bool> {
    Ok(fixed_point_gap(y, w, region, l)? <= T::c(L_STATIONARY_RTOL))
}

/// `k`-th largest magnitude of `y` (`M_k(y)`), zero when `‖y‖₀ < k`.
pub fn m_k<T: Real>(y: &[T], k: usize) -> Result<T> {
    if k == 0 || k > y.len() {
        return Err(Error::SparsityOutOfRange { k, dim: y.len() });
    }
    let mut mags: Vec<T> = y.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(mags[k - 1])
}

/// Largest objective decrease found by a single admissible coordinate move
/// (or swap when the support is full), with the index responsible.
fn best_coordinate_gain<T: Real>(y: &[T], w: &[T], region: &SparseBoxRegion<T>) -> (T, usize) {
    let half = T::c(0.5);
    let x = region.center();
    let delta = region.radius();
    let sq = |v: T| v * v;
    // Decrease from resetting coordinate j to its clipped optimum.
    let move_gain = |j: usize| half * (sq(w[j] - y[j]) - sq(w[j] - region.clip(j, w[j])));

    let mut best = (T::zero(), 0usize);
    let mut consider = |gain: T, index: usize| {
        if gain > best.0 {
            best = (gain, index);
        }
    };

    if count_nonzeros(y) < region.sparsity() {
        for i in 0..y.len() {
            consider(move_gain(i), i);
        }
        return best;
    }

    // Largest single-coordinate gain among all j; swaps add the cost of
    // zeroing i, so only the best j matters for each i (j = i handled apart).
    let mut gains: Vec<(T, usize)> = (0..y.len()).map(|j| (move_gain(j), j)).collect();
    gains.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    for i in (0..y.len()).filter(|&i| !y[i].is_zero()) {
        consider(move_gain(i), i);
        if x[i].abs() > delta {
            // y_i = 0 leaves the box for every t: no admissible swap.
            continue;
        }
        let drop_cost = half * (sq(w[i]) - sq(w[i] - y[i]));
        let best_other = gains.iter().find(|(_, j)| *j != i);
        if let Some(&(g, _)) = best_other {
            consider(g - drop_cost, i);
        }
    }
    best
}

/// Coordinatewise minimum: no single admissible coordinate move (when
/// `‖y‖₀ < k`) or support swap (when `‖y‖₀ = k`) lowers `½‖w − y‖²` by
/// more than `tol`. Swaps that cannot stay in the box are ignored.
pub fn is_cw_minimum<T: Real>(
    y: &[T],
    w: &[T],
    region: &SparseBoxRegion<T>,
    tol: T,
) -> Result<bool> {
    ensure_member(y, w, region)?;
    Ok(best_coordinate_gain(y, w, region).0 <= tol)
}

/// Runs every check and collects the violations.
pub fn stationarity_report<T: Real>(
    y: &[T],
    w: &[T],
    region: &SparseBoxRegion<T>,
    l: T,
    tol: T,
) -> Result<StationarityReport<T>> {
    let mut violations = basic_feasibility_violations(y, w, region, tol)?;
    let basic_feasible = violations.is_empty();

    let gap = fixed_point_gap(y, w, region, l)?;
    let l_stationary_fixed_point = gap <= T::c(L_STATIONARY_RTOL);
    if !l_stationary_fixed_point {
        violations.push(Violation {
            index: 0,
            condition: Condition::FixedPoint,
            residual: gap,
        });
    }

    let (gain, index) = best_coordinate_gain(y, w, region);
    let cw_minimum = gain <= tol;
    if !cw_minimum {
        violations.push(Violation {
            index,
            condition: Condition::CoordinateMove,
            residual: gain,
        });
    }
    Ok(StationarityReport {
        basic_feasible,
        l_stationary_fixed_point,
        cw_minimum,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> (SparseBoxRegion<f64>, [f64; 2]) {
        (
            SparseBoxRegion::new(vec![0.0, -1.0], 2.0, 1).unwrap(),
            [2.0, 3.0],
        )
    }

    #[test]
    fn basic_feasibility_examples() {
        let (r, w) = example();
        assert!(is_basic_feasible(&[2.0, 0.0], &w, &r, 1e-10).unwrap());
        assert!(is_basic_feasible(&[0.0, 1.0], &w, &r, 1e-10).unwrap());
        assert!(!is_basic_feasible(&[1.0, 0.0], &w, &r, 1e-10).unwrap());
        let v = basic_feasibility_violations(&[1.0, 0.0], &w, &r, 1e-10).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].index, 0);
        assert_eq!(v[0].condition, Condition::Interior);
        assert_eq!(
            is_basic_feasible(&[2.0, 3.0], &w, &r, 1e-10),
            Err(Error::Infeasible)
        );
    }

    #[test]
    fn l_stationarity_examples() {
        let (r, w) = example();
        assert!(is_l_stationary(&[0.0, 1.0], &w, &r, 2.0).unwrap());
        // v = (2, 1.5) is closer to (2, 0) than to (0, 1)
        assert!(is_l_stationary(&[2.0, 0.0], &w, &r, 2.0).unwrap());
        assert!(!is_l_stationary(&[2.0, 0.0], &w, &r, 1.0).unwrap());
        let inside = [0.5, 0.0];
        assert!(is_l_stationary(&inside, &inside, &r, 0.3).unwrap());
        assert!(is_l_stationary(&[0.0, 1.0], &w, &r, 0.0).is_err());
    }

    #[test]
    fn m_k_examples() {
        assert_eq!(m_k(&[0.0, 1.0], 1).unwrap(), 1.0);
        assert_eq!(m_k(&[3.0, -5.0, 2.0], 2).unwrap(), 3.0);
        assert_eq!(m_k(&[0.0, 0.0, 0.0], 2).unwrap(), 0.0);
        assert!(m_k(&[1.0], 0).is_err());
        assert!(m_k(&[1.0], 2).is_err());
    }

    #[test]
    fn cw_examples() {
        let (r, w) = example();
        assert!(is_cw_minimum(&[0.0, 1.0], &w, &r, 1e-10).unwrap());
        assert!(!is_cw_minimum(&[2.0, 0.0], &w, &r, 1e-10).unwrap());
        let r2 = SparseBoxRegion::new(vec![0.0, -1.0, 0.0], 2.0, 2).unwrap();
        let inside = [0.5, 0.0, 0.0];
        assert!(is_cw_minimum(&inside, &inside, &r2, 1e-10).unwrap());
    }

    #[test]
    fn swaps_out_of_large_components_are_vacuous() {
        // x_0 is large: y_0 can never be zeroed, so no swap is admissible
        // even though w puts all its mass on coordinate 1.
        let r = SparseBoxRegion::new(vec![5.0, 0.0], 1.0, 1).unwrap();
        let w = [4.0, 100.0];
        assert!(is_cw_minimum(&[4.0, 0.0], &w, &r, 1e-10).unwrap());
        assert!(!is_cw_minimum(&[5.0, 0.0], &w, &r, 1e-10).unwrap());
    }

    #[test]
    fn report_collects_everything() {
        let (r, w) = example();
        let good = stationarity_report(&[0.0, 1.0], &w, &r, 2.0, 1e-10).unwrap();
        assert!(good.all_pass());
        assert!(good.violations.is_empty());
        let bad = stationarity_report(&[1.0, 0.0], &w, &r, 2.0, 1e-10).unwrap();
        assert!(!bad.basic_feasible && !bad.l_stationary_fixed_point && !bad.cw_minimum);
        assert_eq!(bad.violations.len(), 3);
    }
}
