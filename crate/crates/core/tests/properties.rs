use std::f64::consts::TAU;

use hedgehog_core::algebra::{hankel_determinants, IntSeries};
use hedgehog_core::chebyshev::{chebyshev_eval, cstar};
use hedgehog_core::geometry::arcs::{arc_maxima_raw, log_objective_raw, log_potential};
use hedgehog_core::geometry::{arc_maxima, log_objective, spine_moduli, CircleConfiguration};
use hedgehog_core::optimize::{local_minimize, DEFAULT_MAX_ITERATIONS, DEFAULT_STEP_TOLERANCE};
use hedgehog_core::reproduce::cofactor_determinant;
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const SEED: u64 = 20_240_601;

fn configuration(max_n: usize, equal: bool) -> impl Strategy<Value = CircleConfiguration> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            proptest::collection::vec(0.0..TAU, n),
            proptest::collection::vec(0.05f64..1.0, n),
        )
            .prop_map(move |(angles, raw)| {
                let raw = if equal { vec![1.0; raw.len()] } else { raw };
                let total: f64 = raw.iter().sum();
                let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
                CircleConfiguration::normalize(&angles, &w).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, rng_seed: RngSeed::Fixed(SEED), ..ProptestConfig::default() })]

    #[test]
    fn series_sqrt_inverts_squaring(mut c in proptest::collection::vec(-30i64..=30, 1..60)) {
        c[0] = 1;
        let f = IntSeries::from_i64s(&c);
        let sq = f.mul(&f);
        let r = sq.sqrt().unwrap();
        prop_assert_eq!(&r, &f);
        prop_assert_eq!(r.mul(&r), sq);
    }

    #[test]
    fn hankel_matches_cofactor_expansion(c in proptest::collection::vec(-6i64..=6, 11)) {
        let s = IntSeries::from_i64s(&c);
        let r = hankel_determinants(&s, 6).unwrap();
        for e in &r.entries {
            let m: Vec<Vec<BigInt>> = (0..e.k).map(|i| s.coeffs()[i..i + e.k].to_vec()).collect();
            prop_assert_eq!(&e.det, &cofactor_determinant(&m));
        }
    }

    #[test]
    fn objective_is_rotation_and_conjugation_invariant(
        c in configuration(8, false),
        delta in -20.0f64..20.0,
    ) {
        let base = log_objective(&c);
        let tol = 1e-10 * base.abs().max(1.0);
        prop_assert!((log_objective(&c.rotated(delta)) - base).abs() <= tol);
        prop_assert!((log_objective(&c.conjugated()) - base).abs() <= tol);
    }

    #[test]
    fn objective_is_at_least_one(c in configuration(8, false)) {
        prop_assert!(log_objective(&c) >= 0.0);
    }

    #[test]
    fn spines_satisfy_dubinin(c in configuration(10, true)) {
        // a capacity-1 hedgehog with n spines has a spine of length >= 4^(1/n)
        let h = spine_moduli(&c);
        prop_assert_eq!(h.len(), c.len());
        prop_assert!(h.dubinin_bound() >= 1.0 - 1e-12, "{}", h.dubinin_bound());
    }

    #[test]
    fn merging_repeated_points_keeps_objective(
        angles in proptest::collection::vec(0.0..TAU, 1..=5),
        mult in proptest::collection::vec(1u64..=3, 5),
    ) {
        let mult = &mult[..angles.len()];
        let m: u64 = mult.iter().sum();
        let weights: Vec<f64> = mult.iter().map(|&a| a as f64 / m as f64).collect();
        let c = CircleConfiguration::normalize(&angles, &weights).unwrap();
        prop_assert_eq!(c.multiplicities(m).unwrap().iter().sum::<u64>(), m);
        let mut repeated: Vec<f64> = angles
            .iter()
            .zip(mult)
            .flat_map(|(&a, &k)| std::iter::repeat_n(a, k as usize))
            .collect();
        repeated.sort_by(|a, b| a.total_cmp(b));
        let raw = log_objective_raw(&repeated, &vec![1.0 / m as f64; repeated.len()]);
        prop_assert!((raw - log_objective(&c)).abs() <= 1e-12 * raw.abs().max(1.0));
        let live = arc_maxima_raw(&repeated, &vec![1.0 / m as f64; repeated.len()])
            .iter()
            .filter(|a| a.log_max > f64::NEG_INFINITY)
            .count();
        prop_assert_eq!(live, c.len());
    }

    #[test]
    fn chebyshev_duplication(k in 0u64..40, j in -(1i64 << 21)..=(1i64 << 21)) {
        // x on a 2^-20 grid keeps 2x^2 - 1 exact
        let x = j as f64 / (1u64 << 20) as f64;
        let lhs = chebyshev_eval(k, 2.0 * x * x - 1.0);
        let rhs = chebyshev_eval(2 * k, x);
        if x.abs() <= 1.0 {
            prop_assert!((lhs - rhs).abs() <= 1e-11, "{} vs {}", lhs, rhs);
        } else if lhs.is_finite() && rhs.is_finite() {
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, rng_seed: RngSeed::Fixed(SEED), ..ProptestConfig::default() })]

    #[test]
    fn arc_maxima_match_dense_sampling(c in configuration(4, false)) {
        // 10^6 samples per configuration, split evenly over its arcs
        let samples = 1_000_000 / c.len();
        let (a, w) = (c.angles(), c.weights());
        for arc in arc_maxima(&c).per_arc {
            let lo = arc.arc_start_angle;
            let d = (arc.arc_end_angle - lo).rem_euclid(TAU);
            let len = if d == 0.0 { TAU } else { d };
            let sampled = (1..samples)
                .map(|i| log_potential(lo + len * i as f64 / samples as f64, a, w))
                .fold(f64::NEG_INFINITY, f64::max)
                .exp();
            prop_assert!(sampled <= arc.max_value + 1e-12, "sample {} above max {}", sampled, arc.max_value);
            prop_assert!(arc.max_value - sampled <= 1e-8, "sample {} vs max {}", sampled, arc.max_value);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, rng_seed: RngSeed::Fixed(SEED), ..ProptestConfig::default() })]

    #[test]
    fn local_descent_and_gauge(c in configuration(5, true), delta in 0.0..TAU) {
        prop_assume!(c.is_equal_weight());
        let before = log_objective(&c).exp();
        let r = local_minimize(&c, DEFAULT_STEP_TOLERANCE, DEFAULT_MAX_ITERATIONS).unwrap();
        prop_assert!(r.best_objective <= before + 1e-12);
        prop_assert!(r.best_objective >= cstar(c.len() as u64).value - 1e-6);
        let turned = local_minimize(&c.rotated(delta), DEFAULT_STEP_TOLERANCE, DEFAULT_MAX_ITERATIONS)
            .unwrap();
        prop_assert!((turned.best_objective - r.best_objective).abs() <= 1e-9,
            "{} vs {}", turned.best_objective, r.best_objective);
    }
}
