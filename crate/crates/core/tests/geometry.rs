use std::f64::consts::{PI, TAU};

use approx::assert_abs_diff_eq;
use cyclicpoly::polygon::{
    angles_from_sides, measure, sample_central_angles, third_side_triangle, Branch, CentralAngles, RngStream,
};
use proptest::prelude::*;

fn polygon(n: usize, seed: u64) -> CentralAngles {
    sample_central_angles(n, &mut RngStream::new(seed, 7).generator()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn measurement_invariants(n in 3usize..=6, seed in any::<u64>()) {
        let poly = polygon(n, seed);
        let m = measure(&poly);
        prop_assert!(poly.theta().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(poly.theta()[0] >= 0.0 && poly.theta()[n - 1] < TAU);
        prop_assert!((poly.gaps().total() - TAU).abs() <= 1e-12);
        prop_assert!(m.sides.iter().all(|&s| s > 0.0 && s <= 2.0));
        prop_assert!(m.angles.iter().all(|&a| a > 0.0 && a < PI));
        prop_assert!((m.angles.iter().sum::<f64>() - (n as f64 - 2.0) * PI).abs() <= 1e-12);
        prop_assert!((m.perimeter - m.sides.iter().sum::<f64>()).abs() <= 1e-12);
        prop_assert!(m.area >= 0.0);
        if n == 4 {
            prop_assert!((m.angles[0] + m.angles[2] - PI).abs() <= 1e-12);
            prop_assert!((m.angles[1] + m.angles[3] - PI).abs() <= 1e-12);
            let w = m.omega.unwrap();
            prop_assert!(w > 0.0 && w < PI);
            let [d1, d2] = m.diagonals.unwrap();
            prop_assert!((d1 - 2.0 * m.angles[0].sin()).abs() <= 1e-12);
            prop_assert!((d2 - 2.0 * m.angles[1].sin()).abs() <= 1e-12);
        }
        if n <= 4 {
            prop_assert!((m.trig_area().unwrap() - m.area).abs() <= 1e-10);
        }
    }
}

#[test]
fn tan_half_angle_round_trip() {
    let mut rng = RngStream::new(11, 0).generator();
    for _ in 0..10_000 {
        let m = measure(&sample_central_angles(4, &mut rng).unwrap());
        let s = &m.sides;
        let (a, b, w) = angles_from_sides(s[1], s[2], s[3], s[0]).unwrap();
        assert_abs_diff_eq!(a, m.angles[1], epsilon = 1e-9);
        assert_abs_diff_eq!(b, m.angles[2], epsilon = 1e-9);
        assert_abs_diff_eq!(w, m.omega.unwrap(), epsilon = 1e-9);
    }
}

#[test]
fn third_side_matches_a_branch() {
    let mut rng = RngStream::new(12, 0).generator();
    for _ in 0..100_000 {
        let m = measure(&sample_central_angles(3, &mut rng).unwrap());
        let (a, b, c) = (m.sides[0], m.sides[1], m.sides[2]);
        let plus = third_side_triangle(a, b, Branch::Plus).unwrap();
        let minus = third_side_triangle(a, b, Branch::Minus).unwrap();
        assert!((c - plus).abs().min((c - minus).abs()) <= 1e-10, "{a} {b} {c}");
    }
}

#[test]
fn third_side_on_a_diameter() {
    for b in [0.2f64, 1.0, 1.9] {
        let expected = (4.0 - b * b).sqrt();
        assert_abs_diff_eq!(
            third_side_triangle(2.0, b, Branch::Plus).unwrap(),
            expected,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            third_side_triangle(2.0, b, Branch::Minus).unwrap(),
            expected,
            epsilon = 1e-12
        );
    }
    assert!(third_side_triangle(2.5, 1.0, Branch::Plus).is_err());
}

#[test]
fn sampling_is_reproducible_per_stream() {
    let a = polygon(5, 99);
    let b = polygon(5, 99);
    assert_eq!(a, b);
    let c = sample_central_angles(5, &mut RngStream::new(99, 8).generator()).unwrap();
    assert_ne!(a, c);
}
