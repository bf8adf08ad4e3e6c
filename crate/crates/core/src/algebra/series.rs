//! Truncated power series with exact integer and rational coefficients.
//!
//! A series of truncation order `N` carries the coefficients of
//! `x^0, ..., x^N`; everything from `x^(N+1)` on is unknown. Binary operations
//! truncate to the smaller of the two orders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Truncated series `a_0 + a_1 x + ... + a_N x^N + O(x^(N+1))` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    /// Series from its first `coeffs.len()` coefficients; an empty vector is
    /// treated as the order-0 zero series.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Truncation of a polynomial, padding with zeros up to `order`.
    pub fn from_polynomial(p: &IntPolynomial, order: usize) -> Self {
        IntSeries {
            coeffs: (0..=order).map(|i| p.coeff(i)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> IntSeries {
        let keep = (order + 1).min(self.coeffs.len());
        IntSeries::new(self.coeffs[..keep].to_vec())
    }

    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        IntSeries { coeffs: out }
    }

    /// Square root with constant term `+1`.
    ///
    /// From `t^2 = s`: `t_n = (s_n - sum_{0<i<n} t_i t_{n-i}) / 2`. The division
    /// must be exact at every step, otherwise the root does not lie in `Z[[x]]`.
    pub fn sqrt(&self) -> Result<IntSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstant {
                expected: 1,
                found: self.coeffs[0].to_string(),
            });
        }
        let n = self.coeffs.len();
        let mut t: Vec<BigInt> = Vec::with_capacity(n);
        t.push(BigInt::one());
        let two = BigInt::from(2);
        for k in 1..n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc -= &t[i] * &t[k - i];
            }
            let (q, r) = acc.div_rem(&two);
            if !r.is_zero() {
                return Err(Error::NonIntegerCoefficient {
                    index: k,
                    value: BigRational::new(acc, two).to_string(),
                });
            }
            t.push(q);
        }
        Ok(IntSeries { coeffs: t })
    }
}

/// Truncated series with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatSeries {
    coeffs: Vec<BigRational>,
}

impl RatSeries {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        RatSeries { coeffs }
    }

    /// Series from `(numerator, denominator)` pairs.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect(),
        )
    }

    pub fn from_int_series(s: &IntSeries) -> Self {
        Self::new(
            s.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> RatSeries {
        let keep = (order + 1).min(self.coeffs.len());
        RatSeries::new(self.coeffs[..keep].to_vec())
    }

    pub fn neg(&self) -> RatSeries {
        RatSeries::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &RatSeries) -> RatSeries {
        let order = self.order().min(other.order());
        RatSeries::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .take(order + 1)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn mul(&self, other: &RatSeries) -> RatSeries {
        let order = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        RatSeries { coeffs: out }
    }

    /// Drops the constant term and divides by `x`; the order drops by one.
    /// Requires a zero constant term and order at least 1.
    pub fn shift_down(&self) -> Result<RatSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonUnitConstant {
                expected: 0,
                found: self.coeffs[0].to_string(),
            });
        }
        if self.coeffs.len() < 2 {
            return Err(Error::InsufficientCoefficients {
                needed: 2,
                available: self.coeffs.len(),
            });
        }
        Ok(RatSeries::new(self.coeffs[1..].to_vec()))
    }

    /// Square root with constant term `+1`; requires `s_0 = 1`.
    pub fn sqrt(&self) -> Result<RatSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstant {
                expected: 1,
                found: self.coeffs[0].to_string(),
            });
        }
        let n = self.coeffs.len();
        let half = BigRational::new(1.into(), 2.into());
        let mut t: Vec<BigRational> = Vec::with_capacity(n);
        t.push(BigRational::one());
        for k in 1..n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc -= &t[i] * &t[k - i];
            }
            t.push(acc * &half);
        }
        Ok(RatSeries { coeffs: t })
    }

    /// `exp(s)` for `s_0 = 0`, via `e' = s' e`:
    /// `e_n = (1/n) sum_{k=1}^{n} k s_k e_{n-k}`.
    pub fn exp(&self) -> Result<RatSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonUnitConstant {
                expected: 0,
                found: self.coeffs[0].to_string(),
            });
        }
        let n = self.coeffs.len();
        let mut e: Vec<BigRational> = Vec::with_capacity(n);
        e.push(BigRational::one());
        for m in 1..n {
            let mut acc = BigRational::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc += &self.coeffs[k] * BigRational::from_integer(k.into()) * &e[m - k];
            }
            e.push(acc / BigRational::from_integer(m.into()));
        }
        Ok(RatSeries { coeffs: e })
    }
}

/// Exact coefficients `h_0, ..., h_order` with `sqrt(1 - e^{-t}) = sqrt(t) * h(t)`.
///
/// With `t = nu^2`, `1 + nu * h(nu^2)` is the asymptotic expansion of the
/// extremal constant `C_n*`.
pub fn theorem2_coefficients(order: usize) -> RatSeries {
    // 1 - exp(-t) to order+1, then divide by t.
    let mut minus_t = vec![BigRational::zero(); order + 2];
    minus_t[1] = -BigRational::one();
    let e = RatSeries::new(minus_t)
        .exp()
        .expect("constant term is zero by construction");
    let mut one = vec![BigRational::zero(); order + 2];
    one[0] = BigRational::one();
    let quotient = RatSeries::new(one)
        .add(&e.neg())
        .shift_down()
        .expect("1 - exp(-t) vanishes at t = 0");
    quotient
        .sqrt()
        .expect("(1 - exp(-t))/t has constant term 1")
}
