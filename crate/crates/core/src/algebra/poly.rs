use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer polynomial with arbitrary-precision coefficients, stored in
/// ascending order (`coeffs[i]` multiplies `x^i`).
///
/// Trailing zeros are stripped on construction, so the zero polynomial has an
/// empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Exact convolution product.
    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// One Graeffe root-squaring step.
    ///
    /// Writing `p(y) = e(y^2) + y*o(y^2)`, the polynomial
    /// `(-1)^d (e(x)^2 - x*o(x)^2)` is monic of the same degree `d` and its
    /// roots are the squares of the roots of `p`.
    pub fn graeffe(&self) -> Result<IntPolynomial> {
        if !self.is_monic() {
            return Err(Error::NonMonic);
        }
        let d = self.coeffs.len() - 1;
        let even = IntPolynomial::new(self.coeffs.iter().step_by(2).cloned().collect());
        let odd = IntPolynomial::new(self.coeffs.iter().skip(1).step_by(2).cloned().collect());
        let e2 = even.mul(&even);
        let o2 = odd.mul(&odd);
        let len = d + 1;
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in e2.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in o2.coeffs.iter().enumerate() {
            out[i + 1] -= c;
        }
        if d % 2 == 1 {
            for c in &mut out {
                *c = -&*c;
            }
        }
        let g = IntPolynomial::new(out);
        debug_assert!(g.is_monic());
        Ok(g)
    }

    /// Coefficients as `f64`, ascending. Coefficients beyond `f64` range
    /// become infinite.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| {
                c.to_f64()
                    .unwrap_or(f64::INFINITY * c.signum().to_f64().unwrap_or(1.0))
            })
            .collect()
    }

    /// Ascending comma-separated coefficient list, e.g. `-1,-1,0,1`.
    pub fn to_coefficient_list(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses either an ascending coefficient list (`-1,-1,0,1`) or an
    /// expression in `x` (`x^3-x-1`, `2*x^2 + 3x - 1`).
    pub fn parse(input: &str) -> Result<IntPolynomial> {
        let s = input.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        if s.contains(['x', 'X']) {
            parse_expression(s)
        } else {
            parse_coefficient_list(s)
        }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::mul(self, rhs)
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IntPolynomial::parse(s)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn parse_coefficient_list(s: &str) -> Result<IntPolynomial> {
    let coeffs = s
        .split(',')
        .map(|tok| {
            let tok = tok.trim().replace('\u{2212}', "-");
            tok.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad coefficient {tok:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPolynomial::new(coeffs))
}

/// Scans a sum of `[c][*]x[^k]` terms; repeated exponents accumulate.
fn parse_expression(s: &str) -> Result<IntPolynomial> {
    let chars: Vec<char> = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '\u{2212}' => '-',
            'X' => 'x',
            other => other,
        })
        .collect();
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut pos = 0;
    let bad = |msg: &str, at: usize| Error::Parse(format!("{msg} at offset {at} in {s:?}"));

    while pos < chars.len() {
        let mut negative = false;
        let mut saw_sign = false;
        while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            if chars[pos] == '-' {
                negative = !negative;
            }
            saw_sign = true;
            pos += 1;
        }
        if !saw_sign && !coeffs.is_empty() {
            return Err(bad("expected '+' or '-'", pos));
        }

        let digits_start = pos;
        while pos < chars.len() && chars[pos].is_ascii_digit() {
            pos += 1;
        }
        let coefficient: Option<BigInt> = if pos > digits_start {
            let text: String = chars[digits_start..pos].iter().collect();
            Some(text.parse().map_err(|_| bad("bad integer", digits_start))?)
        } else {
            None
        };

        if pos < chars.len() && chars[pos] == '*' {
            if coefficient.is_none() {
                return Err(bad("'*' without a coefficient", pos));
            }
            pos += 1;
            if pos >= chars.len() || chars[pos] != 'x' {
                return Err(bad("expected 'x' after '*'", pos));
            }
        }

        let exponent = if pos < chars.len() && chars[pos] == 'x' {
            pos += 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let exp_start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == exp_start {
                    return Err(bad("expected a nonnegative integer exponent", pos));
                }
                let text: String = chars[exp_start..pos].iter().collect();
                text.parse::<usize>()
                    .map_err(|_| bad("exponent too large", exp_start))?
            } else {
                1
            }
        } else if coefficient.is_some() {
            0
        } else {
            return Err(bad("expected a term", pos));
        };

        if exponent > 1 << 20 {
            return Err(bad("exponent too large", pos));
        }
        let mut c = coefficient.unwrap_or_else(BigInt::one);
        if negative {
            c = -c;
        }
        if coeffs.len() <= exponent {
            coeffs.resize(exponent + 1, BigInt::zero());
        }
        coeffs[exponent] += c;
    }
    if coeffs.is_empty() {
        return Err(Error::Parse(format!("no terms in {s:?}")));
    }
    Ok(IntPolynomial::new(coeffs))
}
