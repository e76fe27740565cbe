//! Randomized and fixed cross-checks of the projection against the
//! exhaustive oracle and the stationarity checkers.

use rand::Rng;

use crate::error::Result;
use crate::oracle::enumerate_projection;
use crate::projection::{membership, project_intersection, SparseBoxRegion};
use crate::stationarity::{is_basic_feasible, is_cw_minimum, is_l_stationary, DEFAULT_TOL};

/// Relative tolerance on the squared distance when comparing with the oracle.
pub const ORACLE_RTOL: f64 = 1e-12;

/// Where `x` and `w` are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `w` inside `x + ΔB∞`.
    InsideBox,
    /// No `|x_i| > Δ`, `w` anywhere.
    NoLarge,
    /// Some but fewer than `k` indices with `|x_i| > Δ`.
    SomeLarge,
    /// Exactly `k` indices with `|x_i| > Δ`.
    AllLarge,
}

const REGIMES: [Regime; 4] = [
    Regime::InsideBox,
    Regime::NoLarge,
    Regime::SomeLarge,
    Regime::AllLarge,
];

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub w: Vec<f64>,
    pub region: SparseBoxRegion<f64>,
    pub regime: Regime,
}

/// Draws one instance with `n ∈ [1, max_n]`, `k ∈ [0, n]`. Values are
/// either continuous or on a half-integer grid, the latter to provoke ties.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> Instance {
    let max_n = max_n.max(1);
    let regime = REGIMES[rng.random_range(0..REGIMES.len())];
    let n = rng.random_range(1..=max_n);
    let k = rng.random_range(0..=n);
    let grid = rng.random_bool(0.3);
    let draw = |rng: &mut R, lo: f64, hi: f64| -> f64 {
        let v = rng.random_range(lo..=hi);
        if grid {
            (2.0 * v).round() / 2.0
        } else {
            v
        }
    };

    let delta = if k > 0 && rng.random_bool(0.03) {
        0.0
    } else {
        let d = draw(rng, 0.25, 3.0);
        if d > 0.0 {
            d
        } else {
            0.5
        }
    };

    let mut x = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let j = rng.random_range(i..n);
        order.swap(i, j);
    }
    let large = match regime {
        Regime::NoLarge | Regime::InsideBox => 0,
        Regime::SomeLarge if k >= 2 => rng.random_range(1..k),
        Regime::SomeLarge => k.min(1),
        Regime::AllLarge => k,
    };
    let nonzeros = if k > large {
        rng.random_range(large..=k)
    } else {
        large
    };
    for (slot, &i) in order[..nonzeros].iter().enumerate() {
        let magnitude = if slot < large {
            delta + draw(rng, 0.5, 4.0).max(0.5)
        } else {
            draw(rng, 0.0, delta)
        };
        x[i] = if rng.random_bool(0.5) {
            magnitude
        } else {
            -magnitude
        };
    }

    let w = if regime == Regime::InsideBox {
        (0..n).map(|i| x[i] + draw(rng, -delta, delta)).collect()
    } else {
        let spread = delta + 4.0;
        (0..n)
            .map(|i| x[i] + draw(rng, -2.0 * spread, 2.0 * spread))
            .collect()
    };
    let region = SparseBoxRegion::new(x, delta, k).expect("generator keeps x in kB0");
    Instance { w, region, regime }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialReport {
    pub feasible: bool,
    pub matches_oracle: bool,
    pub basic_feasible: bool,
    pub l_stationary: bool,
    pub cw_minimum: bool,
    pub projected_sq: f64,
    pub oracle_sq: f64,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.feasible
            && self.matches_oracle
            && self.basic_feasible
            && self.l_stationary
            && self.cw_minimum
    }
}

/// Absolute tolerance for the condition checks, scaled to the instance.
fn check_tol(w: &[f64], region: &SparseBoxRegion<f64>) -> f64 {
    let scale = w
        .iter()
        .chain(region.center())
        .fold(region.radius(), |m, v| m.max(v.abs()));
    DEFAULT_TOL * scale.max(1.0) * scale.max(1.0)
}

pub fn validate_instance(w: &[f64], region: &SparseBoxRegion<f64>) -> Result<TrialReport> {
    let projected = project_intersection(w, region)?;
    let oracle = enumerate_projection(w, region)?;
    let y = &projected.point;
    let tol = check_tol(w, region);
    let feasible = membership(y, region, 1e-12 * region.radius().max(1.0));
    let matches_oracle = (projected.sq_distance - oracle.best_distance_sq).abs()
        <= ORACLE_RTOL * oracle.best_distance_sq.max(f64::MIN_POSITIVE);
    let (basic_feasible, l_stationary, cw_minimum) = if feasible {
        (
            is_basic_feasible(y, w, region, tol)?,
            is_l_stationary(y, w, region, 2.0)?,
            is_cw_minimum(y, w, region, tol)?,
        )
    } else {
        (false, false, false)
    };
    Ok(TrialReport {
        feasible,
        matches_oracle,
        basic_feasible,
        l_stationary,
        cw_minimum,
        projected_sq: projected.sq_distance,
        oracle_sq: oracle.best_distance_sq,
    })
}

/// A hand-checked projection: `expected` is one admissible answer and
/// `sq_distance` the optimal squared distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub w: Vec<f64>,
    pub region: SparseBoxRegion<f64>,
    pub expected: Vec<f64>,
    pub sq_distance: f64,
}

pub fn fixtures() -> Vec<Fixture> {
    let small = SparseBoxRegion::new(vec![0.0, -1.0], 2.0, 1).unwrap();
    let wide = SparseBoxRegion::new(vec![0.0, -1.0], 3.0, 1).unwrap();
    vec![
        Fixture {
            name: "two-dimensional example",
            w: vec![2.0, 3.0],
            region: small,
            expected: vec![0.0, 1.0],
            sq_distance: 8.0,
        },
        Fixture {
            name: "w1",
            w: vec![-2.5, 2.5],
            region: wide.clone(),
            expected: vec![-2.5, 0.0],
            sq_distance: 6.25,
        },
        Fixture {
            name: "w2",
            w: vec![-4.0, -3.5],
            region: wide.clone(),
            expected: vec![-3.0, 0.0],
            sq_distance: 13.25,
        },
        Fixture {
            name: "w3",
            w: vec![3.0, 2.0],
            region: wide,
            expected: vec![3.0, 0.0],
            sq_distance: 4.0,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::count_nonzeros;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixtures_pass() {
        for f in fixtures() {
            let report = validate_instance(&f.w, &f.region).unwrap();
            assert!(report.passed(), "{}: {report:?}", f.name);
            assert_eq!(report.projected_sq, f.sq_distance, "{}", f.name);
            let y = project_intersection(&f.w, &f.region).unwrap().point;
            assert_eq!(y, f.expected, "{}", f.name);
        }
    }

    #[test]
    fn generator_respects_regimes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let inst = random_instance(&mut rng, 8);
            let r = &inst.region;
            assert!(count_nonzeros(r.center()) <= r.sparsity());
            let large = r.center().iter().filter(|v| v.abs() > r.radius()).count();
            match inst.regime {
                Regime::InsideBox => {
                    assert!(r.box_contains(&inst.w));
                    assert_eq!(large, 0);
                }
                Regime::NoLarge => assert_eq!(large, 0),
                Regime::SomeLarge => assert!(large < r.sparsity() || r.sparsity() <= 1),
                Regime::AllLarge => assert!(large == r.sparsity() || r.radius() == 0.0),
            }
        }
    }

    #[test]
    fn random_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for t in 0..2000 {
            let inst = random_instance(&mut rng, 8);
            let report = validate_instance(&inst.w, &inst.region).unwrap();
            assert!(report.passed(), "trial {t}: {inst:?} {report:?}");
        }
    }
}
