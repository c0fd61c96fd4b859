use approx::assert_relative_eq;
use cyclicpoly::special::{gamma, gauss_2f1, integrate, QuadratureSpec};
use proptest::prelude::*;

// reference values from 40-digit arbitrary-precision evaluation
const GAMMA_THIRD: f64 = 2.678_938_534_707_747_6;
const F_THIRDS_AT_09: f64 = 1.405_995_841_147_350_8;

#[test]
fn gamma_one_third() {
    assert_relative_eq!(gamma(1.0 / 3.0).unwrap(), GAMMA_THIRD, max_relative = 1e-13);
}

#[test]
fn gamma_reflection_pair() {
    // Γ(1/3) Γ(2/3) = 2π/√3
    let product = gamma(1.0 / 3.0).unwrap() * gamma(2.0 / 3.0).unwrap();
    assert_relative_eq!(product, 2.0 * std::f64::consts::PI / 3f64.sqrt(), max_relative = 1e-13);
}

#[test]
fn hypergeometric_thirds_near_one() {
    let v = gauss_2f1(1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 0.9).unwrap();
    assert_relative_eq!(v, F_THIRDS_AT_09, max_relative = 1e-13);
}

#[test]
fn hypergeometric_rejects_unit_argument() {
    assert!(gauss_2f1(1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0).is_err());
    assert!(gauss_2f1(0.5, 0.5, 1.0, -0.1).is_err());
    assert!(gauss_2f1(0.5, 0.5, -2.0, 0.3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_recurrence(x in 0.05f64..30.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
    }

    #[test]
    fn hypergeometric_symmetric_in_a_b(a in -2.0f64..3.0, b in -2.0f64..3.0, c in 0.1f64..4.0, z in 0.0f64..0.95) {
        let ab = gauss_2f1(a, b, c, z).unwrap();
        let ba = gauss_2f1(b, a, c, z).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn integral_is_additive(a in -3.0f64..0.0, m in 0.0f64..1.0, b in 1.0f64..4.0) {
        let f = |x: f64| (1.3 * x).sin() + x * x;
        let spec = QuadratureSpec::default();
        let whole = integrate(f, a, b, &spec).unwrap();
        let parts = integrate(f, a, m, &spec).unwrap() + integrate(f, m, b, &spec).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-9);
    }
}
