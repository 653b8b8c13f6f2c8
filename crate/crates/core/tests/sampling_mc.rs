use proptest::prelude::*;
use spherepoly::prob_bounds::poisson_tail_bound;
use spherepoly::sampler::{
    count_in_disjoint_caps, poisson_lower_tail, poisson_upper_tail, random_unit_vector, rng_from_seed,
    sample_poisson_sphere,
};
use spherepoly::sphere_geom::cap_measure;
use spherepoly::{PointCloud, SphericalCap, UnitVector};

#[test]
fn antipodal_cap_counts_match_intensity() {
    let m = 1e5;
    let cloud = sample_poisson_sphere(3, m, 77).unwrap();
    let e = UnitVector::axis(3, 2);
    let caps = [SphericalCap::new(e.clone(), 0.3).unwrap(), SphericalCap::new(e.neg(), 0.3).unwrap()];
    let counts = count_in_disjoint_caps(&cloud, &caps).unwrap();
    let mean = m * cap_measure(3, 0.3).unwrap();
    for c in counts {
        assert!((c as f64 - mean).abs() <= 3.0 * mean.sqrt(), "{c} vs {mean}");
    }
}

#[test]
fn overlapping_caps_are_rejected() {
    let cloud = sample_poisson_sphere(3, 10.0, 1).unwrap();
    let e = UnitVector::axis(3, 0);
    let caps = [SphericalCap::new(e.clone(), 0.5).unwrap(), SphericalCap::new(e, 0.1).unwrap()];
    assert!(count_in_disjoint_caps(&cloud, &caps).is_err());
}

#[test]
fn cap_measure_matches_sampling() {
    let mut rng = rng_from_seed(3);
    let samples = 200_000;
    for n in [2, 4, 6] {
        let pts: Vec<UnitVector> = (0..samples).map(|_| random_unit_vector(n, &mut rng)).collect();
        for r in [0.3, 1.0, 1.7] {
            let cap = SphericalCap::new(UnitVector::axis(n, 0), r).unwrap();
            let hit = pts.iter().filter(|p| cap.contains(p)).count() as f64 / samples as f64;
            let exact = cap_measure(n, r).unwrap();
            let se = (exact * (1.0 - exact) / samples as f64).sqrt();
            assert!((hit - exact).abs() <= 4.0 * se, "n={n} r={r}: {hit} vs {exact}");
        }
    }
}

#[test]
fn cloud_csv_round_trip() {
    let cloud = sample_poisson_sphere(4, 50.0, 12).unwrap();
    let mut buf = Vec::new();
    cloud.write_csv(&mut buf).unwrap();
    let back = PointCloud::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, cloud);
}

#[test]
fn seeds_reproduce_samples() {
    assert_eq!(sample_poisson_sphere(3, 300.0, 5).unwrap(), sample_poisson_sphere(3, 300.0, 5).unwrap());
    assert_ne!(sample_poisson_sphere(3, 300.0, 5).unwrap(), sample_poisson_sphere(3, 300.0, 6).unwrap());
}

#[test]
fn sample_counts_follow_poisson() {
    let (m, trials) = (40.0, 400);
    let counts: Vec<f64> = (0..trials).map(|s| sample_poisson_sphere(2, m, s).unwrap().len() as f64).collect();
    let mean = counts.iter().sum::<f64>() / trials as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    assert!((mean - m).abs() <= 4.0 * (m / trials as f64).sqrt());
    assert!((var / m - 1.0).abs() < 0.3);
}

proptest! {
    #[test]
    fn exact_tails_sit_below_the_bound(lambda in 0.1f64..500.0, frac in 0.0f64..3.0) {
        let x = (frac * lambda.sqrt() * 3.0).ceil();
        prop_assert!(poisson_upper_tail(lambda, x).unwrap() <= poisson_tail_bound(lambda, x) + 1e-15);
        if x <= lambda {
            prop_assert!(poisson_lower_tail(lambda, x).unwrap() <= poisson_tail_bound(lambda, x) + 1e-15);
        }
    }

    #[test]
    fn random_points_are_unit(seed in any::<u64>(), n in 2usize..9) {
        let v = random_unit_vector(n, &mut rng_from_seed(seed));
        let s: f64 = v.iter().map(|x| x * x).sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }
}
