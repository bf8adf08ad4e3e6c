//! Chebyshev polynomials of the first kind and the extremal constants built
//! from them.
//!
//! The constant `C_n* = T_n(2^(1/n))^(1/n)` is the objective value of the
//! extremal configuration returned by [`extremal_configuration`]. Everything
//! is computed in log space: `T_n(2^(1/n))` is roughly `(1 + nu)^n` with
//! `nu = sqrt(log 4 / n)` and overflows long before `n = 10^6`.

pub mod precise;

use std::f64::consts::{LN_2, PI};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::algebra::theorem2_coefficients;
use crate::geometry::CircleConfiguration;

/// `acosh(1 + u)` for `u >= 0`, accurate when `u` is tiny.
pub fn acosh_1p(u: f64) -> f64 {
    debug_assert!(u >= 0.0);
    (u + (u * (2.0 + u)).sqrt()).ln_1p()
}

/// `log T_n(1 + u)` for `u >= 0`.
fn ln_chebyshev_1p(n: u64, u: f64) -> f64 {
    let a = acosh_1p(u);
    let na = n as f64 * a;
    // cosh(na) = e^{na} (1 + e^{-2na}) / 2
    na - LN_2 + (-2.0 * na).exp().ln_1p()
}

/// Angle `acos(x)` for `x` in `[0, 1]`, avoiding the cancellation of `acos`
/// near 1.
fn acos_unit(x: f64) -> f64 {
    if x > 0.5 {
        2.0 * ((1.0 - x) / 2.0).sqrt().asin()
    } else {
        x.acos()
    }
}

fn parity_sign(n: u64) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `T_n(x)` for `|x| <= 1`; degrees 0 and 1 are exact.
fn chebyshev_unit(n: u64, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let sym = if x < 0.0 { parity_sign(n) } else { 1.0 };
            sym * (n as f64 * acos_unit(x.abs())).cos()
        }
    }
}

/// `T_n(x)`.
///
/// Uses `cos(n acos x)` on `[-1, 1]` and `cosh(n acosh |x|)` outside, where
/// `acosh` is evaluated through `log1p` so that arguments just above 1 keep
/// full relative precision. Returns `±inf` once the value leaves `f64` range;
/// use [`chebyshev_ln_abs`] there.
pub fn chebyshev_eval(n: u64, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        return chebyshev_unit(n, x);
    }
    let (ln, sign) = chebyshev_ln_abs(n, x).expect("no zeros outside [-1, 1]");
    sign * ln.exp()
}

/// `(ln |T_n(x)|, sign T_n(x))`, or `None` where `T_n(x) = 0`.
pub fn chebyshev_ln_abs(n: u64, x: f64) -> Option<(f64, f64)> {
    let ax = x.abs();
    let sym = if x < 0.0 { parity_sign(n) } else { 1.0 };
    if ax <= 1.0 {
        let v = chebyshev_unit(n, x);
        if v == 0.0 {
            return None;
        }
        return Some((v.abs().ln(), v.signum()));
    }
    Some((ln_chebyshev_1p(n, ax - 1.0), sym))
}

/// An extremal constant `T_n(2^(1/n) t)^(1/n)`, stored through its logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalConstant {
    pub n: u64,
    pub t_scale: f64,
    pub value: f64,
    pub log_value: f64,
}

/// `C_n* = T_n(2^(1/n))^(1/n)`.
pub fn cstar(n: u64) -> ExtremalConstant {
    cstar_t(n, 1.0)
}

/// `T_n(2^(1/n) t)^(1/n)` for `t >= 1`.
///
/// # Panics
/// If `n == 0` or `t < 1`.
pub fn cstar_t(n: u64, t: f64) -> ExtremalConstant {
    assert!(n >= 1, "cstar needs n >= 1");
    assert!(t >= 1.0, "cstar_t needs t >= 1, got {t}");
    // u = 2^(1/n) t - 1 without forming 2^(1/n) - 1 by subtraction
    let u = t * (LN_2 / n as f64).exp_m1() + (t - 1.0);
    let log_value = ln_chebyshev_1p(n, u) / n as f64;
    ExtremalConstant {
        n,
        t_scale: t,
        value: log_value.exp(),
        log_value,
    }
}

/// Limit of [`cstar_t`] as `n` grows: `t + sqrt(t^2 - 1)`.
pub fn cstar_t_limit(t: f64) -> f64 {
    t + (t * t - 1.0).sqrt()
}

/// Zeros of the monic degree-`n` polynomial `±(-z)^(n/2) T_n(2^(1/n-1) sqrt(2 - z - 1/z))`,
/// as an equal-weight configuration.
///
/// Each nonnegative zero `x_m = cos((2m-1) pi / (2n))` of `T_n` gives the
/// conjugate pair `e^{±i theta}` with `sin(theta/2) = 2^(-1/n) x_m`; for odd
/// `n` the zero `x = 0` gives the single point `z = 1`.
pub fn extremal_configuration(n: u64) -> CircleConfiguration {
    assert!(n >= 1, "extremal configuration needs n >= 1");
    let scale = (-LN_2 / n as f64).exp();
    let k = n.div_ceil(2);
    let mut angles = Vec::with_capacity(n as usize);
    for m in 1..=k {
        // cos((2m-1)pi/(2n)) written as a sine so small zeros stay accurate
        let steps = n + 1 - 2 * m;
        if steps == 0 {
            angles.push(0.0);
            continue;
        }
        let x = (PI * steps as f64 / (2 * n) as f64).sin();
        let theta = 2.0 * (scale * x).asin();
        angles.push(theta);
        angles.push(2.0 * PI - theta);
    }
    CircleConfiguration::equal_weights(&angles).expect("zeros are distinct and weights sum to 1")
}

/// Partial sum of the small-`nu` expansion of `C_n*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticApproximation {
    pub n: u64,
    pub nu: f64,
    pub terms_used: usize,
    pub value: f64,
}

/// `nu = sqrt(log 4 / n)`.
pub fn nu(n: u64) -> f64 {
    (2.0 * LN_2 / n as f64).sqrt()
}

/// `1 + nu * (h_0 + h_1 nu^2 + ... + h_{terms-1} nu^{2(terms-1)})`, where `h` are
/// the exact coefficients from [`theorem2_coefficients`].
///
/// `terms = 4` gives `1 + nu - nu^3/4 + 5 nu^5/96 - nu^7/128`.
pub fn asymptotic_cstar(n: u64, terms: usize) -> AsymptoticApproximation {
    assert!(n >= 1, "asymptotic_cstar needs n >= 1");
    let nu = nu(n);
    let value = if terms == 0 {
        1.0
    } else {
        let h = theorem2_coefficients(terms - 1);
        let nu2 = nu * nu;
        // Horner in nu^2
        let poly = h.coeffs().iter().rev().fold(0.0, |acc, c| {
            acc * nu2 + c.to_f64().expect("small rational")
        });
        1.0 + nu * poly
    };
    AsymptoticApproximation {
        n,
        nu,
        terms_used: terms,
        value,
    }
}

/// Agreement bound `2 nu^(2k+1)` between `C_n*` and the `k`-term expansion.
pub fn asymptotic_tolerance(nu: f64, terms: usize) -> f64 {
    2.0 * nu.powi(2 * terms as i32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// `T_n(x)` at rational `x` from the binomial-sum formula, exactly.
    fn chebyshev_exact(n: u32, x: &BigRational) -> BigRational {
        let x2m1 = x * x - BigRational::one();
        let mut total = BigRational::zero();
        let mut binom = BigInt::one(); // C(n, 2k)
        for k in 0..=(n / 2) {
            if k > 0 {
                let j = 2 * k;
                binom = binom * BigInt::from(n - j + 2) * BigInt::from(n - j + 1)
                    / (BigInt::from(j) * BigInt::from(j - 1));
            }
            let term = BigRational::from_integer(binom.clone())
                * num_traits::pow(x2m1.clone(), k as usize)
                * num_traits::pow(x.clone(), (n - 2 * k) as usize);
            total += term;
        }
        total
    }

    #[test]
    fn matches_exact_binomial_sum() {
        for n in [0u32, 1, 2, 3, 5, 8, 13, 21, 34, 40] {
            for m in -640i64..=640 {
                if m % 7 != 0 {
                    continue;
                }
                let x = m as f64 / 64.0; // exactly representable, |x| <= 10
                let exact = chebyshev_exact(n, &BigRational::new(m.into(), 64.into()));
                let exact = exact.to_f64().unwrap();
                let got = chebyshev_eval(n as u64, x);
                let err = (got - exact).abs();
                let tol = 1e-12 * exact.abs().max(1.0);
                assert!(err <= tol, "T_{n}({x}) = {got}, exact {exact}");
            }
        }
    }

    #[test]
    fn spot_values() {
        let t4 = chebyshev_eval(4, 2f64.powf(0.25));
        let expected = 17.0 - 8.0 * 2f64.sqrt();
        assert!((t4 - expected).abs() < 1e-13 * expected);
        assert!((chebyshev_eval(4, 2f64.sqrt()) - 17.0).abs() < 1e-13 * 17.0);
        for n in [0, 1, 2, 7, 1000, 1_000_000] {
            assert_eq!(chebyshev_eval(n, 1.0), 1.0);
            assert_eq!(chebyshev_eval(n, -1.0), parity_sign(n));
        }
    }

    #[test]
    fn bounded_on_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let n = rng.gen_range(0..5000);
            let x: f64 = rng.gen_range(-1.0..=1.0);
            assert!(chebyshev_eval(n, x).abs() <= 1.0);
        }
    }

    #[test]
    fn duplication_identity() {
        // x on a 2^-20 grid keeps 2x^2 - 1 exact, so only evaluation error remains.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3000 {
            let k: u64 = rng.gen_range(1..=500);
            let x = rng.gen_range(-3 * (1 << 20)..=3 * (1 << 20)) as f64 / (1u64 << 20) as f64;
            let y = 2.0 * x * x - 1.0;
            match (chebyshev_ln_abs(2 * k, x), chebyshev_ln_abs(k, y)) {
                _ if x.abs() <= 1.0 => {
                    let a = chebyshev_eval(2 * k, x);
                    let b = chebyshev_eval(k, y);
                    assert!((a - b).abs() <= 1e-11, "k={k} x={x}: {a} vs {b}");
                }
                (Some((la, sa)), Some((lb, sb))) => {
                    assert_eq!(sa, sb);
                    // relative error of the values = difference of logs
                    assert!((la - lb).abs() <= 1e-11, "k={k} x={x}: {la} vs {lb}");
                }
                other => panic!("unexpected zero {other:?}"),
            }
        }
    }

    #[test]
    fn ln_form_matches_direct_value() {
        for &(n, x) in &[(3u64, 1.5), (10, -2.0), (7, -1.25), (50, 1.0001)] {
            let (ln, sign) = chebyshev_ln_abs(n, x).unwrap();
            let direct = chebyshev_eval(n, x);
            assert!((sign * ln.exp() - direct).abs() <= 1e-13 * direct.abs());
        }
        assert!(chebyshev_ln_abs(1, 0.0).is_none());
        // far beyond f64 range
        let (ln, _) = chebyshev_ln_abs(1000, 3.0).unwrap();
        let expected = 1000.0 * (3.0 + 8f64.sqrt()).ln() - LN_2;
        assert!((ln - expected).abs() < 1e-12 * expected);
        assert!(chebyshev_eval(1000, 3.0).is_infinite());
    }

    #[test]
    fn cstar_small_values() {
        assert!((cstar(1).value - 2.0).abs() < 1e-15);
        assert!((cstar(2).value - 3f64.sqrt()).abs() < 1e-15);
        // frozen from an independent 50-digit evaluation
        assert!((cstar(3).value - 1.616_015_821_710_416_6).abs() < 1e-14);
        let c4 = (17.0 - 8.0 * 2f64.sqrt()).powf(0.25);
        assert!((cstar(4).value - c4).abs() < 1e-14);
        assert!((cstar(4).value - 1.544_213_268_900_870_5).abs() < 1e-14);
        assert!((cstar(8).value - 1.399_081_110_968_494_1).abs() < 1e-14);
    }

    #[test]
    fn cstar_matches_direct_chebyshev_for_small_n() {
        for n in 1..=60u64 {
            let direct = chebyshev_eval(n, 2f64.powf(1.0 / n as f64)).powf(1.0 / n as f64);
            assert!((cstar(n).value - direct).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn cstar_bounds_and_monotonicity() {
        let mut prev = f64::INFINITY;
        for n in 1..=10_000u64 {
            let c = cstar(n);
            assert!((1.0..=2.0).contains(&c.value), "n = {n}");
            assert!((c.value - c.log_value.exp()).abs() == 0.0);
            assert!(c.value < prev, "not decreasing at n = {n}");
            prev = c.value;
            assert!(chebyshev_ln_abs(n, 2f64.powf(1.0 / n as f64)).unwrap().0 >= 0.0);
        }
        assert!(cstar(1_000_000).value > 1.0);
    }

    #[test]
    fn cstar_t_examples() {
        for n in [1, 2, 5, 100] {
            assert_eq!(cstar_t(n, 1.0), cstar(n));
        }
        assert!((cstar_t(1, 2.0).value - 4.0).abs() < 1e-14);
        let limit = cstar_t_limit(2.0);
        assert!((limit - (2.0 + 3f64.sqrt())).abs() < 1e-15);
        assert!((cstar_t(100_000, 2.0).value - limit).abs() < 1e-4);
    }

    #[test]
    fn extremal_configuration_small_cases() {
        let c = extremal_configuration(1);
        assert_eq!(c.angles(), &[0.0]);
        let c = extremal_configuration(2);
        assert!((c.angles()[0] - PI / 3.0).abs() < 1e-15);
        assert!((c.angles()[1] - 5.0 * PI / 3.0).abs() < 1e-15);
        assert_eq!(c.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn extremal_configuration_is_conjugation_closed() {
        for n in 1..=40u64 {
            let c = extremal_configuration(n);
            assert_eq!(c.len(), n as usize);
            let mut mirrored: Vec<f64> = c
                .angles()
                .iter()
                .map(|&a| if a == 0.0 { 0.0 } else { 2.0 * PI - a })
                .collect();
            mirrored.sort_by(f64::total_cmp);
            for (a, b) in c.angles().iter().zip(&mirrored) {
                assert!((a - b).abs() < 1e-12, "n = {n}");
            }
            assert_eq!(c.angles().contains(&0.0), n % 2 == 1);
        }
    }

    #[test]
    fn value_at_minus_one_is_chebyshev_value() {
        for n in 1..=64u64 {
            let c = extremal_configuration(n);
            // |-1 - e^{i theta}| = 2 cos(theta/2)
            let ln_q: f64 = c
                .angles()
                .iter()
                .map(|a| (2.0 * (a / 2.0).cos()).abs().ln())
                .sum();
            let expected = n as f64 * cstar(n).log_value;
            assert!(
                (ln_q - expected).abs() <= 1e-9,
                "n = {n}: {ln_q} vs {expected}"
            );
        }
    }

    #[test]
    fn reconstructed_polynomial_is_monic_with_unit_constant() {
        use num_complex::Complex64;
        for n in 1..=24u64 {
            let c = extremal_configuration(n);
            let mut poly = vec![Complex64::new(1.0, 0.0)];
            for &a in c.angles() {
                let z = Complex64::from_polar(1.0, a);
                let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
                for (i, &p) in poly.iter().enumerate() {
                    next[i + 1] += p;
                    next[i] -= p * z;
                }
                poly = next;
            }
            assert!((poly[n as usize] - 1.0).norm() < 1e-9);
            assert!((poly[0].norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn asymptotic_partial_sums() {
        let a = asymptotic_cstar(100, 4);
        let nu = a.nu;
        assert!((nu * nu * 100.0 - 4f64.ln()).abs() < 1e-15 * 4f64.ln());
        let explicit = 1.0 + nu - nu.powi(3) / 4.0 + 5.0 * nu.powi(5) / 96.0 - nu.powi(7) / 128.0;
        assert!((a.value - explicit).abs() < 1e-15);
        assert_eq!(asymptotic_cstar(100, 0).value, 1.0);
        assert!((asymptotic_cstar(1_000_000, 4).value - 1.0).abs() < 2e-3);
    }

    #[test]
    fn asymptotic_error_shrinks_with_order() {
        // In f64 the comparison is meaningful while nu^(2k+1) stays well above 1e-16.
        for &n in &[100u64, 1000] {
            let exact = cstar(n).value;
            let mut prev = f64::INFINITY;
            for k in 1..=3 {
                let err = (exact - asymptotic_cstar(n, k).value).abs();
                assert!(err < prev);
                assert!(
                    err <= asymptotic_tolerance(nu(n), k),
                    "n={n} k={k} err={err}"
                );
                prev = err;
            }
        }
    }
}
