//! Exact Hankel determinants `A_k = det(a_{i+j})_{0<=i,j<k}` of an integer series.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::series::IntSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HankelEntry {
    pub k: usize,
    #[serde(with = "decimal")]
    pub det: BigInt,
    /// `|A_k|^(1/k)`, or 0.0 when `A_k = 0`.
    pub root_k: f64,
    /// `|A_k|^(1/k^2)`, or 0.0 when `A_k = 0`.
    pub root_k2: f64,
    /// Set when `A_k = 0`; the growth statistics carry no information then.
    pub vanishing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HankelReport {
    pub entries: Vec<HankelEntry>,
}

impl HankelReport {
    fn from_determinants(dets: Vec<BigInt>) -> Self {
        let entries = dets
            .into_iter()
            .enumerate()
            .map(|(i, det)| {
                let k = i + 1;
                let (root_k, root_k2, vanishing) = if det.is_zero() {
                    (0.0, 0.0, true)
                } else {
                    let ln = ln_abs(&det);
                    ((ln / k as f64).exp(), (ln / (k * k) as f64).exp(), false)
                };
                HankelEntry {
                    k,
                    det,
                    root_k,
                    root_k2,
                    vanishing,
                }
            })
            .collect();
        HankelReport { entries }
    }

    /// Largest `|A_k|^(1/k)` over the non-vanishing determinants.
    pub fn max_root_k(&self) -> Option<(usize, f64)> {
        self.entries
            .iter()
            .filter(|e| !e.vanishing)
            .map(|e| (e.k, e.root_k))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn last(&self) -> Option<&HankelEntry> {
        self.entries.last()
    }

    /// CSV with header `k,A_k,abs_root_k,abs_root_k2`; determinants are
    /// written as exact decimal integers.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("k,A_k,abs_root_k,abs_root_k2\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                e.k,
                e.det,
                crate::format_sig(e.root_k, digits),
                crate::format_sig(e.root_k2, digits)
            );
        }
        out
    }
}

/// Natural log of `|n|` for `n != 0`, valid far beyond `f64` range.
pub fn ln_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        let f: f64 = num_traits::ToPrimitive::to_f64(&n.abs()).unwrap_or(f64::INFINITY);
        return f.ln();
    }
    let shift = bits - 64;
    let top: f64 = num_traits::ToPrimitive::to_f64(&(n.abs() >> shift)).unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Hankel determinants `A_1, ..., A_kmax` of the series coefficients.
///
/// One fraction-free elimination pass over the `kmax x kmax` Hankel matrix
/// yields every leading principal minor as a pivot. If some `A_k` vanishes the
/// pass cannot continue without pivoting, and the remaining determinants are
/// computed one by one with row pivoting.
pub fn hankel_determinants(s: &IntSeries, kmax: usize) -> Result<HankelReport> {
    if kmax == 0 {
        return Ok(HankelReport { entries: vec![] });
    }
    let needed = 2 * kmax - 1;
    if s.coeffs().len() < needed {
        return Err(Error::InsufficientCoefficients {
            needed,
            available: s.coeffs().len(),
        });
    }
    let a = s.coeffs();
    let mut dets = leading_minors(a, kmax);
    for k in dets.len() + 1..=kmax {
        dets.push(determinant(hankel_matrix(a, k)));
    }
    Ok(HankelReport::from_determinants(dets))
}

fn hankel_matrix(a: &[BigInt], k: usize) -> Vec<Vec<BigInt>> {
    (0..k).map(|i| a[i..i + k].to_vec()).collect()
}

/// Leading principal minors from an elimination pass without pivoting.
/// Stops after the first vanishing minor (which is included).
fn leading_minors(a: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut m = hankel_matrix(a, n);
    let mut dets = Vec::with_capacity(n);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pivot = m[k][k].clone();
        dets.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        let (upper, lower) = m.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..n {
                let t = &row[j] * &pivot - &factor * &pivot_row[j];
                row[j] = t / &prev;
            }
        }
        prev = pivot;
    }
    dets
}

/// Determinant by fraction-free elimination with row pivoting.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign_flip = false;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign_flip = !sign_flip;
        }
        let pivot = m[k][k].clone();
        let (upper, lower) = m.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..n {
                let t = &row[j] * &pivot - &factor * &pivot_row[j];
                row[j] = t / &prev;
            }
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplace(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::from(1);
        }
        let mut total = BigInt::zero();
        for (j, entry) in m[0].iter().enumerate() {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = entry * laplace(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn smyth_prefix_determinants() {
        let s = IntSeries::from_i64s(&[1, 1, 0, 1, 0, -2, 2, -2, 4, -6, 6, -6, 6, 0, -16]);
        let r = hankel_determinants(&s, 8).unwrap();
        let dets: Vec<i64> = r
            .entries
            .iter()
            .map(|e| (&e.det).try_into().unwrap())
            .collect();
        // cross-checked with an independent symbolic determinant
        assert_eq!(dets, vec![1, -1, -1, 7, 56, -76, 112, 720]);
        assert_eq!(r.entries[0].root_k, 1.0);
        assert_eq!(r.entries[1].root_k2, 1.0);
    }

    #[test]
    fn rank_one_series_vanishes() {
        let s = IntSeries::from_i64s(&[1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let r = hankel_determinants(&s, 5).unwrap();
        assert_eq!(r.entries[0].det, BigInt::from(1));
        for e in &r.entries[1..] {
            assert!(e.det.is_zero());
            assert!(e.vanishing);
            assert_eq!((e.root_k, e.root_k2), (0.0, 0.0));
        }
        assert_eq!(r.max_root_k(), Some((1, 1.0)));
    }

    #[test]
    fn zero_minor_mid_sequence_falls_back_to_pivoting() {
        // a = [0, 1, 0, 1, 0, ...]: A_1 = 0 but later minors need not vanish
        let coeffs: Vec<i64> = (0..11).map(|i| i % 2).collect();
        let s = IntSeries::from_i64s(&coeffs);
        let r = hankel_determinants(&s, 6).unwrap();
        for e in &r.entries {
            let expected = laplace(&hankel_matrix(s.coeffs(), e.k));
            assert_eq!(e.det, expected, "k = {}", e.k);
        }
        assert_eq!(r.entries[1].det, BigInt::from(-1));
    }

    #[test]
    fn insufficient_coefficients() {
        let s = IntSeries::from_i64s(&[1, 1, 1]);
        assert_eq!(
            hankel_determinants(&s, 3),
            Err(Error::InsufficientCoefficients {
                needed: 5,
                available: 3
            })
        );
        assert!(hankel_determinants(&s, 2).is_ok());
    }

    #[test]
    fn csv_layout() {
        let s = IntSeries::from_i64s(&[1, 1, 0]);
        let csv = hankel_determinants(&s, 2).unwrap().to_csv(10);
        assert_eq!(csv, "k,A_k,abs_root_k,abs_root_k2\n1,1,1,1\n2,-1,1,1\n");
    }

    #[test]
    fn ln_abs_large_values() {
        let big = BigInt::from(3).pow(2000);
        let expected = 2000.0 * 3f64.ln();
        assert!((ln_abs(&big) - expected).abs() < 1e-9 * expected);
        assert!((ln_abs(&BigInt::from(-8)) - 8f64.ln()).abs() < 1e-15);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(120))]
        #[test]
        fn matches_laplace_oracle(coeffs in proptest::collection::vec(-5i64..=5, 11)) {
            let s = IntSeries::from_i64s(&coeffs);
            let r = hankel_determinants(&s, 6).unwrap();
            for e in &r.entries {
                let expected = laplace(&hankel_matrix(s.coeffs(), e.k));
                proptest::prop_assert_eq!(&e.det, &expected);
            }
        }
    }
}
