use num_rational::Rational64;
use proptest::prelude::*;
use sparsebox::oracle::{enumerate_projection, piece_projection};
use sparsebox::validation::{fixtures, random_instance, validate_instance};
use sparsebox::{
    classify_support, count_nonzeros, membership, project_intersection, project_sparse,
    squared_distance, ExactRegion, Region,
};

/// (w, x, Δ, k) with x ∈ kB₀ and n ≤ 9.
fn instance() -> impl Strategy<Value = (Vec<f64>, Region)> {
    (1usize..=9)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(|(n, k)| {
            (
                prop::collection::vec(-8.0f64..8.0, n),
                prop::collection::vec(-5.0f64..5.0, n),
                prop::sample::subsequence((0..n).collect::<Vec<_>>(), k),
                0.0f64..4.0,
                Just(k),
            )
        })
        .prop_map(|(w, raw_x, support, delta, k)| {
            let mut x = vec![0.0; w.len()];
            for i in support {
                x[i] = raw_x[i];
            }
            (w, Region::new(x, delta, k).unwrap())
        })
}

/// No `|x_i| > Δ` and `w` inside the box, so truncating `w` stays feasible.
fn box_inactive() -> impl Strategy<Value = (Vec<f64>, Region)> {
    instance()
        .prop_flat_map(|(_, region)| {
            let delta = region.radius();
            let x: Vec<f64> = region
                .center()
                .iter()
                .map(|v| v.clamp(-delta, delta))
                .collect();
            let n = x.len();
            let k = region.sparsity();
            (prop::collection::vec(-1.0f64..=1.0, n), Just((x, delta, k)))
        })
        .prop_map(|(u, (x, delta, k))| {
            let w = x
                .iter()
                .zip(&u)
                .map(|(a, b)| a + b * delta)
                .collect::<Vec<_>>();
            let w = w
                .iter()
                .zip(&x)
                .map(|(wi, xi)| wi.clamp(xi - delta, xi + delta))
                .collect();
            (w, Region::new(x, delta, k).unwrap())
        })
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 2000,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn output_is_feasible((w, region) in instance()) {
        let p = project_intersection(&w, &region).unwrap();
        prop_assert!(count_nonzeros(&p.point) <= region.sparsity());
        prop_assert!(membership(&p.point, &region, 1e-12 * region.radius().max(1.0)));
        prop_assert_eq!(p.sq_distance, squared_distance(&w, &p.point));
        let nonzero: Vec<usize> = (0..w.len()).filter(|&i| p.point[i] != 0.0).collect();
        prop_assert!(nonzero.iter().all(|i| p.support.contains(i)));
    }

    #[test]
    fn matches_oracle((w, region) in instance()) {
        let p = project_intersection(&w, &region).unwrap();
        let o = enumerate_projection(&w, &region).unwrap();
        prop_assert!(rel_close(p.sq_distance, o.best_distance_sq),
            "{} vs {}", p.sq_distance, o.best_distance_sq);
    }

    #[test]
    fn idempotent((w, region) in instance()) {
        let p = project_intersection(&w, &region).unwrap();
        let q = project_intersection(&p.point, &region).unwrap();
        prop_assert!(q.sq_distance <= 1e-24 * p.sq_distance.max(1.0));
    }

    #[test]
    fn large_indices_stay_in_support((w, region) in instance()) {
        let p = project_intersection(&w, &region).unwrap();
        for i in classify_support(&region).large {
            prop_assert!(p.support.contains(&i));
            prop_assert!(p.point[i] != 0.0);
        }
    }

    #[test]
    fn matches_hard_thresholding_when_box_is_inactive((w, region) in box_inactive()) {
        let p = project_intersection(&w, &region).unwrap();
        let h = project_sparse(&w, region.sparsity()).unwrap();
        prop_assert!(rel_close(p.sq_distance, h.sq_distance));
    }

    #[test]
    fn piece_projection_is_nonexpansive(
        (w, region) in instance(),
        shift in prop::collection::vec(-3.0f64..3.0, 9),
    ) {
        let n = w.len();
        let support: Vec<usize> = (0..region.sparsity()).collect();
        let v: Vec<f64> = w.iter().zip(&shift).map(|(a, b)| a + b).collect();
        if let (Some(pw), Some(pv)) = (
            piece_projection(&w, &region, &support),
            piece_projection(&v, &region, &support),
        ) {
            prop_assert!(squared_distance(&pw, &pv) <= squared_distance(&w, &v[..n]) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn scales_with_powers_of_two((w, region) in instance(), e in -4i32..=4) {
        let c = 2f64.powi(e);
        let scaled = Region::new(
            region.center().iter().map(|v| v * c).collect(),
            region.radius() * c,
            region.sparsity(),
        ).unwrap();
        let ws: Vec<f64> = w.iter().map(|v| v * c).collect();
        let p = project_intersection(&w, &region).unwrap();
        let q = project_intersection(&ws, &scaled).unwrap();
        prop_assert!(rel_close(q.sq_distance, c * c * p.sq_distance));
    }
}

#[test]
fn degenerate_sets() {
    let w = [1.0, -2.0, 3.0];
    let zero_k = Region::new(vec![0.0; 3], 1.0, 0).unwrap();
    assert_eq!(
        project_intersection(&w, &zero_k).unwrap().point,
        vec![0.0; 3]
    );
    let zero_delta = Region::new(vec![0.5, 0.0, -1.0], 0.0, 2).unwrap();
    assert_eq!(
        project_intersection(&w, &zero_delta).unwrap().point,
        vec![0.5, 0.0, -1.0]
    );
}

#[test]
fn fixtures_match() {
    for f in fixtures() {
        let p = project_intersection(&f.w, &f.region).unwrap();
        assert_eq!(p.sq_distance, f.sq_distance, "{}", f.name);
        let o = enumerate_projection(&f.w, &f.region).unwrap();
        assert!(
            o.minimizers.iter().any(|m| m.point == f.expected),
            "{}",
            f.name
        );
        assert!(validate_instance(&f.w, &f.region).unwrap().passed());
    }
}

#[test]
fn rational_projection_agrees_with_oracle() {
    let r = |n: i64, d: i64| Rational64::new(n, d);
    let region = ExactRegion::new(vec![r(3, 2), r(1, 2), r(0, 1)], r(1, 1), 2).unwrap();
    let w = [r(3, 5), r(7, 5), r(9, 10)];
    let p = project_intersection(&w, &region).unwrap();
    let o = enumerate_projection(&w, &region).unwrap();
    assert_eq!(p.sq_distance, o.best_distance_sq);
    assert_eq!(p.point, vec![r(3, 5), r(7, 5), r(0, 1)]);
}

#[test]
fn seeded_generator_sweep() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for t in 0..3000 {
        let inst = random_instance(&mut rng, 10);
        let report = validate_instance(&inst.w, &inst.region).unwrap();
        assert!(report.passed(), "trial {t}: {inst:?} {report:?}");
    }
}
