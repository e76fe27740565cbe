//! Euclidean projection onto `C = kB₀ ∩ (x + ΔB∞)`.
//!
//! `kB₀` is the set of vectors with at most `k` nonzero entries and
//! `x + ΔB∞` is the ℓ∞ box of radius `Δ` around a `k`-sparse center `x`.
//! The set is a finite union of convex pieces `A_S ∩ (x + ΔB∞)`, one per
//! support `S` with `|S| = k`, and the projection onto a single piece is
//! a clip on `S` followed by zeroing `S^c`. Choosing the best piece reduces
//! to picking the `k` largest gains
//!
//! ```text
//! z_i = w_i² − (w_i − clip_i(w_i))²
//! ```
//!
//! subject to keeping every index whose center component is larger than
//! `Δ` in magnitude: dropping such an index puts the point outside the box.
//! The whole computation is one clip and one top-`k` selection, `O(n)` on
//! average and never worse than a full sort.
//!
//! Zeroed components are written as exact zeros so `‖·‖₀` never needs a
//! tolerance.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The constraint set `kB₀ ∩ (x + ΔB∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseBoxRegion<T> {
    center: Vec<T>,
    radius: T,
    sparsity: usize,
}

impl<T: Scalar> SparseBoxRegion<T> {
    /// Builds a region, rejecting an empty or non-finite center, a negative
    /// radius, `k > n`, and centers with more than `k` nonzeros.
    pub fn new(center: Vec<T>, radius: T, sparsity: usize) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::EmptyVector);
        }
        check_finite(&center, "box center")?;
        if !radius.is_finite_scalar() || radius < T::zero() {
            return Err(Error::InvalidRadius);
        }
        if sparsity > center.len() {
            return Err(Error::SparsityOutOfRange {
                k: sparsity,
                dim: center.len(),
            });
        }
        let nonzeros = count_nonzeros(&center);
        if nonzeros > sparsity {
            return Err(Error::CenterNotSparse {
                nonzeros,
                k: sparsity,
            });
        }
        Ok(Self {
            center,
            radius,
            sparsity,
        })
    }

    pub fn center(&self) -> &[T] {
        &self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn sparsity(&self) -> usize {
        self.sparsity
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Same center and sparsity level, different radius.
    pub fn with_radius(&self, radius: T) -> Result<Self> {
        Self::new(self.center.clone(), radius, self.sparsity)
    }

    /// `true` when `w` lies in the box (boundary included), ignoring sparsity.
    pub fn box_contains(&self, w: &[T]) -> bool {
        w.len() == self.dim()
            && w.iter()
                .zip(&self.center)
                .all(|(&wi, &xi)| (wi - xi).abs() <= self.radius)
    }

    fn lower(&self, i: usize) -> T {
        self.center[i] - self.radius
    }

    fn upper(&self, i: usize) -> T {
        self.center[i] + self.radius
    }

    /// Projection of a single coordinate onto `[x_i − Δ, x_i + Δ]`.
    pub fn clip(&self, i: usize, value: T) -> T {
        let lo = self.lower(i);
        let hi = self.upper(i);
        // max(lo, min(v, hi))
        let v = if value < hi { value } else { hi };
        if v > lo {
            v
        } else {
            lo
        }
    }
}

/// Partition of `supp(x)` into small (`|x_i| ≤ Δ`) and large (`|x_i| > Δ`)
/// components. Both lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupportSplit {
    pub small: Vec<usize>,
    pub large: Vec<usize>,
}

/// One element of the projection set together with its support.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult<T> {
    pub point: Vec<T>,
    /// Sorted, `|support| ≤ k`; the point vanishes outside it.
    pub support: Vec<usize>,
    /// `‖w − point‖₂²`
    pub sq_distance: T,
}

pub(crate) fn check_finite<T: Scalar>(v: &[T], what: &'static str) -> Result<()> {
    if v.iter().all(|x| x.is_finite_scalar()) {
        Ok(())
    } else {
        Err(Error::NonFinite { what })
    }
}

fn check_len<T>(v: &[T], dim: usize) -> Result<()> {
    if v.len() == dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        })
    }
}

pub fn count_nonzeros<T: Scalar>(v: &[T]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

pub fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&ai, &bi)| {
        let d = ai - bi;
        acc + d * d
    })
}

// Inputs are checked finite, so the comparison is total.
fn cmp_scalar<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Which candidates a top-`slots` selection keeps, ties going to the lower
/// index.
enum Take<T> {
    Nothing,
    Everything,
    /// Scores above the threshold, plus the first `ties` candidates equal
    /// to it in ascending index order.
    Above {
        threshold: T,
        ties: usize,
    },
}

/// Finds the `slots`-th largest score by selection; `scores` is reordered.
/// One ascending pass with [`Take::keeps`] then reproduces a stable
/// descending sort's choice in linear time.
fn top_threshold<T: Scalar>(scores: &mut [T], slots: usize) -> Take<T> {
    if slots == 0 {
        return Take::Nothing;
    }
    if slots >= scores.len() {
        return Take::Everything;
    }
    let (above, threshold, _) = scores.select_nth_unstable_by(slots - 1, |a, b| cmp_scalar(b, a));
    let threshold = *threshold;
    let ties = slots - above.iter().filter(|&&g| g > threshold).count();
    Take::Above { threshold, ties }
}

impl<T: Scalar> Take<T> {
    /// Must be called on candidates in ascending index order.
    fn keeps(&mut self, score: T) -> bool {
        match self {
            Take::Nothing => false,
            Take::Everything => true,
            Take::Above { threshold, ties } => {
                if score > *threshold {
                    true
                } else if score == *threshold && *ties > 0 {
                    *ties -= 1;
                    true
                } else {
                    false
                }
            }
        }
    }
}

/// `w_i² − (w_i − y_i)²`, the decrease in distance from keeping index `i`.
fn gain<T: Scalar>(wi: T, yi: T) -> T {
    let gap = wi - yi;
    wi * wi - gap * gap
}

/// Componentwise clip of `w` to `[x − Δ, x + Δ]`.
pub fn project_box<T: Scalar>(w: &[T], region: &SparseBoxRegion<T>) -> Result<Vec<T>> {
    check_len(w, region.dim())?;
    check_finite(w, "w")?;
    Ok(w.iter()
        .enumerate()
        .map(|(i, &wi)| region.clip(i, wi))
        .collect())
}

/// Projection onto the piece `A_S`: keeps `w` on `support`, zeroes the rest.
pub fn project_piece<T: Scalar>(w: &[T], support: &[usize]) -> Result<Vec<T>> {
    let mut out = vec![T::zero(); w.len()];
    for &i in support {
        if i >= w.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: w.len(),
            });
        }
        out[i] = w[i];
    }
    Ok(out)
}

/// Hard thresholding: an element of `proj(w | kB₀)`.
///
/// Keeps `k` entries of largest magnitude; among equal magnitudes the lower
/// index wins, so the result is deterministic even when the projection set
/// has several elements.
pub fn project_sparse<T: Scalar>(w: &[T], k: usize) -> Result<ProjectionResult<T>> {
    if k > w.len() {
        return Err(Error::SparsityOutOfRange { k, dim: w.len() });
    }
    check_finite(w, "w")?;
    let mut scores: Vec<T> = w.iter().map(|v| v.abs()).collect();
    let mut take = top_threshold(&mut scores, k);
    let mut support = Vec::with_capacity(k);
    let mut point = vec![T::zero(); w.len()];
    for (i, &wi) in w.iter().enumerate() {
        if take.keeps(wi.abs()) {
            support.push(i);
            point[i] = wi;
        }
    }
    let sq_distance = squared_distance(w, &point);
    Ok(ProjectionResult {
        point,
        support,
        sq_distance,
    })
}

/// Splits `supp(x)` by the `|x_i| ≤ Δ` test.
pub fn classify_support<T: Scalar>(region: &SparseBoxRegion<T>) -> SupportSplit {
    let mut split = SupportSplit::default();
    for (i, &xi) in region.center.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        if xi.abs() <= region.radius {
            split.small.push(i);
        } else {
            split.large.push(i);
        }
    }
    split
}

/// `true` iff `‖y‖₀ ≤ k` and `‖y − x‖∞ ≤ Δ + tol`.
pub fn membership<T: Scalar>(y: &[T], region: &SparseBoxRegion<T>, tol: T) -> bool {
    y.len() == region.dim()
        && count_nonzeros(y) <= region.sparsity
        && y.iter()
            .zip(&region.center)
            .all(|(&yi, &xi)| (yi - xi).abs() <= region.radius + tol)
}

/// An element of `argmin { ‖w − y‖₂ : y ∈ kB₀ ∩ (x + ΔB∞) }`.
///
/// When `w` is already in the box, hard thresholding is tried first and
/// returned if it stays in the box. Otherwise the best piece is selected
/// among supports containing every large index of `x` by taking the largest
/// gains `z` (ties to the lowest index).
///
/// Allocates its output; use a [`Projector`] to project repeatedly without
/// allocating.
pub fn project_intersection<T: Scalar>(
    w: &[T],
    region: &SparseBoxRegion<T>,
) -> Result<ProjectionResult<T>> {
    let mut projector = Projector::new();
    let sq_distance = projector.project(w, region)?;
    Ok(ProjectionResult {
        point: projector.point,
        support: projector.support,
        sq_distance,
    })
}

/// Workspace for [`project_intersection`] that keeps its buffers between
/// calls.
///
/// ```
/// use sparsebox::{Projector, Region};
///
/// let region = Region::new(vec![0.0, -1.0], 2.0, 1).unwrap();
/// let mut p = Projector::new();
/// assert_eq!(p.project(&[2.0, 3.0], &region).unwrap(), 8.0);
/// assert_eq!(p.point(), &[0.0, 1.0]);
/// assert_eq!(p.support(), &[1]);
/// ```
#[derive(Debug, Clone, Default)]
pub struct Projector<T> {
    point: Vec<T>,
    support: Vec<usize>,
    keep: Vec<bool>,
    scratch: Vec<T>,
    chosen: Vec<bool>,
    scores: Vec<T>,
}

impl<T: Scalar> Projector<T> {
    pub fn new() -> Self {
        Self {
            point: Vec::new(),
            support: Vec::new(),
            keep: Vec::new(),
            scratch: Vec::new(),
            chosen: Vec::new(),
            scores: Vec::new(),
        }
    }

    /// Last projected point.
    pub fn point(&self) -> &[T] {
        &self.point
    }

    /// Sorted support of the last projected point.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Projects `w` and returns `‖w − point‖₂²`.
    pub fn project(&mut self, w: &[T], region: &SparseBoxRegion<T>) -> Result<T> {
        check_len(w, region.dim())?;
        let n = region.dim();
        let k = region.sparsity;
        let delta = region.radius;
        let x = &region.center;
        self.point.clear();
        self.support.clear();
        self.keep.clear();
        self.scratch.clear();

        if k == 0 || delta.is_zero() {
            check_finite(w, "w")?;
            if k == 0 {
                // x = 0 and C = {0}
                self.point.resize(n, T::zero());
            } else {
                self.point.extend_from_slice(x);
                self.support.extend((0..n).filter(|&i| !x[i].is_zero()));
            }
            return Ok(squared_distance(w, &self.point));
        }

        // one pass: clip, mark the large indices of x, collect free gains
        let mut inside = true;
        let mut forced = 0;
        for i in 0..n {
            let wi = w[i];
            if !wi.is_finite_scalar() {
                return Err(Error::NonFinite { what: "w" });
            }
            inside = inside && (wi - x[i]).abs() <= delta;
            let yi = region.clip(i, wi);
            self.point.push(yi);
            let large = x[i].abs() > delta;
            self.keep.push(large);
            if large {
                forced += 1;
            } else {
                self.scratch.push(gain(wi, yi));
            }
        }

        if inside && self.try_truncation(w, region) {
            return Ok(self.finish_truncation(w));
        }

        let mut take = top_threshold(&mut self.scratch, k - forced);
        let mut sq_distance = T::zero();
        for (i, (&wi, yi)) in w.iter().zip(self.point.iter_mut()).enumerate() {
            if self.keep[i] || take.keeps(gain(wi, *yi)) {
                self.support.push(i);
            } else {
                *yi = T::zero();
            }
            let d = wi - *yi;
            sq_distance = sq_distance + d * d;
        }
        Ok(sq_distance)
    }

    /// Hard thresholding of `w`, accepted when it drops no large index of
    /// `x`. On success the kept indices are in `keep`; otherwise `keep` and
    /// `scratch` are left as they were.
    fn try_truncation(&mut self, w: &[T], region: &SparseBoxRegion<T>) -> bool {
        self.scores.clear();
        self.scores.extend(w.iter().map(|v| v.abs()));
        let mut take = top_threshold(&mut self.scores, region.sparsity);
        self.chosen.clear();
        self.chosen.extend(w.iter().map(|wi| take.keeps(wi.abs())));
        let stays = self
            .chosen
            .iter()
            .zip(&region.center)
            .all(|(&c, &xi)| c || xi.abs() <= region.radius);
        if stays {
            std::mem::swap(&mut self.keep, &mut self.chosen);
        }
        stays
    }

    fn finish_truncation(&mut self, w: &[T]) -> T {
        for (i, &kept) in self.keep.iter().enumerate() {
            if kept {
                self.support.push(i);
                self.point[i] = w[i];
            } else {
                self.point[i] = T::zero();
            }
        }
        squared_distance(w, &self.point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn region(x: &[f64], delta: f64, k: usize) -> SparseBoxRegion<f64> {
        SparseBoxRegion::new(x.to_vec(), delta, k).unwrap()
    }

    #[test]
    fn region_rejects_bad_input() {
        assert_eq!(
            SparseBoxRegion::new(vec![1.0, 2.0], 1.0, 1),
            Err(Error::CenterNotSparse { nonzeros: 2, k: 1 })
        );
        assert_eq!(
            SparseBoxRegion::new(vec![0.0], -1.0, 1),
            Err(Error::InvalidRadius)
        );
        assert_eq!(
            SparseBoxRegion::new(vec![0.0], 1.0, 2),
            Err(Error::SparsityOutOfRange { k: 2, dim: 1 })
        );
        assert_eq!(
            SparseBoxRegion::<f64>::new(vec![], 1.0, 0),
            Err(Error::EmptyVector)
        );
        assert!(SparseBoxRegion::new(vec![f64::NAN], 1.0, 1).is_err());
    }

    #[test]
    fn box_clip() {
        let r = region(&[0.0, -1.0], 2.0, 1);
        assert_eq!(project_box(&[2.0, 3.0], &r).unwrap(), vec![2.0, 1.0]);
        assert_eq!(project_box(&[0.0, -1.0], &r).unwrap(), vec![0.0, -1.0]);
        let degenerate = region(&[0.0, -1.0], 0.0, 1);
        assert_eq!(
            project_box(&[7.0, -9.0], &degenerate).unwrap(),
            vec![0.0, -1.0]
        );
        assert!(matches!(
            project_box(&[1.0], &r),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            project_box(&[1.0, f64::INFINITY], &r),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn piece() {
        let w = [1.0, 2.0, 3.0];
        assert_eq!(project_piece(&w, &[0, 2]).unwrap(), vec![1.0, 0.0, 3.0]);
        assert_eq!(project_piece(&w, &[0, 1, 2]).unwrap(), w.to_vec());
        assert_eq!(project_piece(&w, &[]).unwrap(), vec![0.0; 3]);
        assert_eq!(
            project_piece(&w, &[3]),
            Err(Error::IndexOutOfRange { index: 3, dim: 3 })
        );
    }

    #[test]
    fn sparse_truncation() {
        let r = project_sparse(&[-2.5, 2.5], 1).unwrap();
        assert_eq!(r.point, vec![-2.5, 0.0]);
        assert_eq!(r.support, vec![0]);
        assert_eq!(r.sq_distance, 6.25);
        assert_eq!(
            project_sparse(&[1.0, 3.0, 2.0], 2).unwrap().point,
            vec![0.0, 3.0, 2.0]
        );
        assert_eq!(
            project_sparse(&[1.0, -3.0, 2.0], 3).unwrap().point,
            vec![1.0, -3.0, 2.0]
        );
        assert!(project_sparse(&[1.0], 2).is_err());
    }

    #[test]
    fn support_split() {
        let s = classify_support(&region(&[0.0, -1.0], 2.0, 1));
        assert_eq!(s.small, vec![1]);
        assert!(s.large.is_empty());
        let s = classify_support(&region(&[5.0, 0.0, 0.5], 1.0, 2));
        assert_eq!(s.small, vec![2]);
        assert_eq!(s.large, vec![0]);
        let s = classify_support(&region(&[0.0, 0.0], 1.0, 0));
        assert_eq!(s, SupportSplit::default());
    }

    #[test]
    fn membership_checks() {
        let r = region(&[0.0, -1.0], 2.0, 1);
        assert!(membership(&[0.0, -1.0], &r, 0.0));
        assert!(membership(&[0.0, 1.0], &r, 0.0));
        assert!(!membership(&[2.0, 3.0], &r, 0.0));
        assert!(!membership(&[0.0, 1.5], &r, 0.0));
        assert!(membership(&[0.0, 1.0 + 1e-13], &r, 1e-12));
    }

    #[test]
    fn worked_example() {
        let r = region(&[0.0, -1.0], 2.0, 1);
        let p = project_intersection(&[2.0, 3.0], &r).unwrap();
        assert_eq!(p.point, vec![0.0, 1.0]);
        assert_eq!(p.support, vec![1]);
        assert_eq!(p.sq_distance, 8.0);
    }

    #[test]
    fn wide_box_cases() {
        let r = region(&[0.0, -1.0], 3.0, 1);
        assert_eq!(
            project_intersection(&[-2.5, 2.5], &r).unwrap().point,
            vec![-2.5, 0.0]
        );
        assert_eq!(
            project_intersection(&[-4.0, -3.5], &r).unwrap().point,
            vec![-3.0, 0.0]
        );
        let p3 = project_intersection(&[3.0, 2.0], &r).unwrap();
        assert_eq!(p3.point, vec![3.0, 0.0]);
        assert_eq!(p3.sq_distance, 4.0);
    }

    #[test]
    fn member_is_fixed() {
        let r = region(&[0.0, -1.0, 0.0], 2.0, 2);
        let w = [1.5, 0.5, 0.0];
        let p = project_intersection(&w, &r).unwrap();
        assert_eq!(p.point, w.to_vec());
        assert_eq!(p.sq_distance, 0.0);
    }

    #[test]
    fn degenerate_sets() {
        let zero = region(&[0.0, 0.0, 0.0], 1.0, 0);
        let p = project_intersection(&[1.0, -2.0, 3.0], &zero).unwrap();
        assert_eq!(p.point, vec![0.0; 3]);
        assert!(p.support.is_empty());
        assert_eq!(p.sq_distance, 14.0);

        let point = region(&[0.0, 2.0, 0.0], 0.0, 2);
        let p = project_intersection(&[5.0, 5.0, 5.0], &point).unwrap();
        assert_eq!(p.point, vec![0.0, 2.0, 0.0]);
        assert_eq!(p.support, vec![1]);
    }

    #[test]
    fn truncation_that_leaves_box_falls_back() {
        // w is in the box, but dropping the large component x_0 = 1.5
        // leaves the box, so plain truncation would be infeasible.
        let r = region(&[1.5, 0.5, 0.0], 1.0, 2);
        let w = [0.6, 1.4, 0.9];
        assert!(r.box_contains(&w));
        let truncated = project_sparse(&w, 2).unwrap();
        assert!(!membership(&truncated.point, &r, 0.0));
        let p = project_intersection(&w, &r).unwrap();
        assert_eq!(p.point, vec![0.6, 1.4, 0.0]);
        assert_eq!(p.support, vec![0, 1]);
        assert!((p.sq_distance - 0.81).abs() < 1e-15);
    }

    #[test]
    fn boundary_counts_as_inside() {
        let r = region(&[0.0, -1.0], 2.0, 1);
        // second coordinate exactly on the upper face
        let p = project_intersection(&[0.5, 1.0], &r).unwrap();
        assert_eq!(p.point, vec![0.0, 1.0]);
    }

    #[test]
    fn forced_support_fills_all_slots() {
        // both nonzeros of x are large, k = 2 = |ℓ(x)|
        let r = region(&[3.0, 0.0, -3.0], 1.0, 2);
        let p = project_intersection(&[0.0, 10.0, 0.0], &r).unwrap();
        assert_eq!(p.point, vec![2.0, 0.0, -2.0]);
        assert_eq!(p.support, vec![0, 2]);
    }

    #[test]
    fn exact_rational_arithmetic() {
        let q = |n: i64, d: i64| Rational64::new(n, d);
        let r = SparseBoxRegion::new(vec![q(0, 1), q(-1, 1)], q(2, 1), 1).unwrap();
        let p = project_intersection(&[q(2, 1), q(3, 1)], &r).unwrap();
        assert_eq!(p.point, vec![q(0, 1), q(1, 1)]);
        assert_eq!(p.sq_distance, q(8, 1));

        let r = SparseBoxRegion::new(vec![q(0, 1), q(-1, 1)], q(3, 1), 1).unwrap();
        let p = project_intersection(&[q(-5, 2), q(5, 2)], &r).unwrap();
        assert_eq!(p.point, vec![q(-5, 2), q(0, 1)]);
    }

    #[test]
    fn single_precision() {
        let r = SparseBoxRegion::new(vec![0.0f32, -1.0], 2.0, 1).unwrap();
        let p = project_intersection(&[2.0f32, 3.0], &r).unwrap();
        assert_eq!(p.point, vec![0.0f32, 1.0]);
    }
}
