use cyclicpoly::claims::{run_claim, RunOptions};
use cyclicpoly::montecarlo::{ks_test, MomentAccumulator, PairAccumulator};
use cyclicpoly::polygon::{sample_central_angles, RngStream};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn moment_merge_matches_single_pass(xs in prop::collection::vec(-50.0f64..50.0, 3..60), cut in 1usize..50) {
        let cut = cut.min(xs.len() - 1);
        let mut whole = MomentAccumulator::new();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut left, mut right) = (MomentAccumulator::new(), MomentAccumulator::new());
        xs[..cut].iter().for_each(|&x| left.push(x));
        xs[cut..].iter().for_each(|&x| right.push(x));
        left.merge(&right);
        prop_assert_eq!(left.count(), whole.count());
        prop_assert!((left.mean() - whole.mean()).abs() <= 1e-10);
        prop_assert!((left.variance() - whole.variance()).abs() <= 1e-8 * (1.0 + whole.variance()));
    }

    #[test]
    fn pair_merge_is_associative(xs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 12..60)) {
        let third = xs.len() / 3;
        let part = |r: &[(f64, f64)]| {
            let mut acc = PairAccumulator::with_center(0.5, -0.5);
            r.iter().for_each(|&(x, y)| acc.push(x, y));
            acc
        };
        let (a, b, c) = (part(&xs[..third]), part(&xs[third..2 * third]), part(&xs[2 * third..]));
        let mut ab_c = a;
        ab_c.merge(&b);
        ab_c.merge(&c);
        let mut bc = b;
        bc.merge(&c);
        let mut a_bc = a;
        a_bc.merge(&bc);
        let (r1, r2) = (ab_c.correlation().unwrap(), a_bc.correlation().unwrap());
        prop_assert!((r1.rho - r2.rho).abs() <= 1e-12);
        prop_assert!((r1.stderr - r2.stderr).abs() <= 1e-12);
    }
}

#[test]
fn random_gap_has_the_spacing_law() {
    // a gap at a uniformly chosen index, over 2π, is Beta(1, n − 1)
    for n in [3usize, 4, 6] {
        let mut rng = RngStream::new(5, n as u64).generator();
        let samples: Vec<f64> = (0..20_000)
            .map(|_| {
                let g = sample_central_angles(n, &mut rng).unwrap().gaps().normalized();
                g[rng.gen_range(0..n)]
            })
            .collect();
        let cdf = |u: f64| 1.0 - (1.0 - u.clamp(0.0, 1.0)).powi(n as i32 - 1);
        let r = ks_test(&samples, cdf, 0.01).unwrap();
        assert!(r.pass, "n = {n}: D = {}", r.d_statistic);
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    for id in ["SIDE_MEAN", "TENT_CHI2", "ANGLE_KS", "QUAD_AREA_TWICE_TRI"] {
        let run = |workers| {
            let opts = RunOptions {
                workers,
                record_timing: false,
                ..RunOptions::default()
            };
            let mut r = run_claim(id, 50_000, &opts).unwrap();
            r.workers = 0;
            r
        };
        assert_eq!(run(1), run(3), "{id}");
    }
}

#[test]
fn seed_changes_the_estimate() {
    let run = |seed| {
        let opts = RunOptions {
            seed,
            workers: 1,
            record_timing: false,
            ..RunOptions::default()
        };
        run_claim("SIDE_MEAN", 20_000, &opts).unwrap().estimate
    };
    assert_eq!(run(1), run(1));
    assert_ne!(run(1), run(2));
}
