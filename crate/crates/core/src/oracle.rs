//! Brute-force reference for the sparse-box projection.
//!
//! Every support `S` with `|S| = k` is visited in lexicographic order. The
//! piece `A_S ∩ (x + ΔB∞)` is nonempty only when `S` contains all large
//! indices of the center; for those, the unique closest point of the piece
//! is the box clip on `S` with zeros elsewhere. Exponential in `n`, so it is
//! restricted to small instances.

use crate::error::{Error, Result};
use crate::projection::{check_finite, classify_support, squared_distance, SparseBoxRegion};
use crate::scalar::Scalar;

/// Largest dimension accepted by [`enumerate_projection`].
pub const MAX_DIM: usize = 25;
/// Largest number of pieces accepted by [`enumerate_projection`].
pub const MAX_PIECES: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Minimizer<T> {
    pub support: Vec<usize>,
    pub point: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T> {
    pub best_distance_sq: T,
    /// All pieces whose closest point ties with the best, in lexicographic
    /// order of support.
    pub minimizers: Vec<Minimizer<T>>,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Closest point of the piece `A_S ∩ (x + ΔB∞)`, or `None` when the piece
/// misses the box.
pub fn piece_projection<T: Scalar>(
    w: &[T],
    region: &SparseBoxRegion<T>,
    support: &[usize],
) -> Option<Vec<T>> {
    let mut y = vec![T::zero(); w.len()];
    let mut in_support = vec![false; w.len()];
    for &i in support {
        y[i] = region.clip(i, w[i]);
        in_support[i] = true;
    }
    // Clipped coordinates are in the box by construction; a zero is
    // admissible only where |x_i| ≤ Δ.
    let feasible = region
        .center()
        .iter()
        .zip(&in_support)
        .all(|(&xi, &kept)| kept || xi.abs() <= region.radius());
    feasible.then_some(y)
}

/// Exhaustive minimization of `‖w − y‖₂²` over the sparse box.
pub fn enumerate_projection<T: Scalar>(
    w: &[T],
    region: &SparseBoxRegion<T>,
) -> Result<OracleResult<T>> {
    let n = region.dim();
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    check_finite(w, "w")?;
    let k = region.sparsity();
    let pieces = binomial(n, k);
    if n > MAX_DIM || pieces > MAX_PIECES {
        return Err(Error::InstanceTooLarge { dim: n, pieces });
    }

    let large = classify_support(region).large;
    let mut candidates: Vec<(T, Minimizer<T>)> = Vec::new();
    let mut best: Option<T> = None;

    let mut support: Vec<usize> = (0..k).collect();
    loop {
        let contains_large = large.iter().all(|i| support.binary_search(i).is_ok());
        if contains_large {
            if let Some(point) = piece_projection(w, region, &support) {
                let d = squared_distance(w, &point);
                best = Some(match best {
                    Some(b) if b <= d => b,
                    _ => d,
                });
                candidates.push((
                    d,
                    Minimizer {
                        support: support.clone(),
                        point,
                    },
                ));
            }
        }
        if !next_combination(&mut support, n) {
            break;
        }
    }

    // x itself lies in the piece of any S ⊇ supp(x), so this cannot fail.
    let best = best.ok_or(Error::Infeasible)?;
    let tol = T::tie_tolerance() * best;
    let minimizers = candidates
        .into_iter()
        .filter(|(d, _)| *d - best <= tol)
        .map(|(_, m)| m)
        .collect::<Vec<_>>();
    Ok(OracleResult {
        best_distance_sq: best,
        minimizers,
    })
}

/// Advances `comb` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
