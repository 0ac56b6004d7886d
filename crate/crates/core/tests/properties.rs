use std::f64::consts::PI;

use proptest::prelude::*;
use spinpoly::series::{coefficient_polynomial, coefficient_table, top_down_coefficient, SeriesCache};
use spinpoly::spin_algebra::{axis_dot_j, character, rotation_from_polynomial, rotation_oracle, Axis};
use spinpoly::vandermonde::solve_coefficients;
use spinpoly::{Complex64, ComplexMatrix, Spin};

fn spin_strategy(max: u32) -> impl Strategy<Value = Spin> {
    (0..=max).prop_map(Spin::from_twice)
}

fn axis_strategy() -> impl Strategy<Value = Axis> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("axis away from the origin", |(x, y, z)| x * x + y * y + z * z > 0.01)
        .prop_map(|(x, y, z)| Axis::new(x, y, z).unwrap())
}

fn angle() -> impl Strategy<Value = f64> {
    -2.0 * PI..2.0 * PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitary_with_unit_determinant(spin in spin_strategy(16), theta in angle(), axis in axis_strategy()) {
        let u = rotation_from_polynomial(spin, theta, &axis);
        prop_assert!(u.unitarity_defect() <= 1e-10 * spin.dim() as f64);
        prop_assert!((u.determinant().norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn period_two_pi_up_to_sign(spin in spin_strategy(12), theta in angle(), axis in axis_strategy()) {
        let u = rotation_from_polynomial(spin, theta, &axis);
        let shifted = rotation_from_polynomial(spin, theta + 2.0 * PI, &axis);
        let sign = if spin.is_integer() { 1.0 } else { -1.0 };
        prop_assert!(shifted.max_abs_diff(&u.scale(Complex64::new(sign, 0.0))) <= 1e-10);
    }

    #[test]
    fn reversing_axis_reverses_angle(spin in spin_strategy(16), theta in angle(), axis in axis_strategy()) {
        let reversed = rotation_from_polynomial(spin, theta, &axis.reversed());
        let backwards = rotation_from_polynomial(spin, -theta, &axis);
        prop_assert!(reversed.max_abs_diff(&backwards) <= 1e-10);
    }

    #[test]
    fn polynomial_matches_dense_exponential(spin in spin_strategy(16), theta in angle(), axis in axis_strategy()) {
        let poly = rotation_from_polynomial(spin, theta, &axis);
        let oracle = rotation_oracle(spin, theta, &axis);
        prop_assert!(poly.max_abs_diff(&oracle) <= 1e-10);
    }

    #[test]
    fn trace_is_the_character(spin in spin_strategy(12), theta in angle(), axis in axis_strategy()) {
        let trace = rotation_from_polynomial(spin, theta, &axis).trace();
        prop_assert!((trace - Complex64::new(character(spin, theta), 0.0)).norm() <= 1e-9);
    }

    #[test]
    fn both_coefficient_paths_agree(spin in spin_strategy(16), theta in angle()) {
        let solved = solve_coefficients(spin, theta).unwrap();
        for m in 0..=spin.twice_j() {
            let series = top_down_coefficient(spin, spin.twice_j() - m, theta).unwrap();
            prop_assert!((solved.get(m as usize) - series).norm() <= 1e-10);
        }
    }

    #[test]
    fn lower_spin_coefficients_are_prefixes(twice_j in 0u32..30, k_offset in 0u32..30) {
        let spin = Spin::from_twice(twice_j);
        let k = k_offset % (twice_j + 1);
        let low = coefficient_polynomial(spin, k).unwrap();
        let high = coefficient_polynomial(Spin::from_twice(twice_j + 4), k).unwrap();
        prop_assert_eq!(low.parity(), high.parity());
        prop_assert!(low.coeffs().len() <= high.coeffs().len());
        prop_assert_eq!(low.coeffs(), &high.coeffs()[..low.coeffs().len()]);
    }
}

/// `d/dθ U = i n̂·J U`, so at `θ = 0` the first two derivatives are
/// `i n̂·J` and `-(n̂·J)²`.
#[test]
fn taylor_tangency_at_identity() {
    let axis = Axis::new(0.2, 0.9, -0.4).unwrap();
    let h = 1e-4;
    for twice_j in [1u32, 2, 5, 8] {
        let spin = Spin::from_twice(twice_j);
        let u = |t: f64| rotation_from_polynomial(spin, t, &axis);
        let nj = axis_dot_j(&axis, spin);
        let first = (&u(h) - &u(-h)).scale(Complex64::new(0.5 / h, 0.0));
        let expected = nj.scale(Complex64::i());
        assert!(first.max_abs_diff(&expected) < 1e-6, "2j = {twice_j}");
        let second =
            (&(&u(h) + &u(-h)) - &u(0.0).scale(Complex64::new(2.0, 0.0))).scale(Complex64::new(1.0 / (h * h), 0.0));
        let expected = (&nj * &nj).scale(Complex64::new(-1.0, 0.0));
        assert!(second.max_abs_diff(&expected) < 1e-5, "2j = {twice_j}");
    }
}

#[test]
fn identity_at_zero_angle() {
    for twice_j in 0..=20 {
        let spin = Spin::from_twice(twice_j);
        let u = rotation_from_polynomial(spin, 0.0, &Axis::y());
        assert!(u.max_abs_diff(&ComplexMatrix::identity(spin.dim())) < 1e-15);
    }
}

#[test]
fn cache_is_deterministic_across_orders_and_threads() {
    let reference: Vec<_> = (0..=24u32)
        .map(|k| coefficient_polynomial(Spin::from_twice(24), k).unwrap())
        .collect();
    let backwards = SeriesCache::new();
    for k in (0..=24u32).rev() {
        assert_eq!(
            backwards.coefficient_polynomial(Spin::from_twice(24), k).unwrap(),
            reference[k as usize]
        );
    }
    let shared = SeriesCache::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..4u32)
            .map(|offset| {
                let shared = &shared;
                scope.spawn(move || {
                    (0..=24u32)
                        .map(|i| (i + 7 * offset) % 25)
                        .map(|k| (k, shared.coefficient_polynomial(Spin::from_twice(24), k).unwrap()))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (k, poly) in handle.join().unwrap() {
                assert_eq!(poly, reference[k as usize]);
            }
        }
    });
    let table = coefficient_table(Spin::from_twice(24));
    assert_eq!(table.polys(), &reference[..]);
}
