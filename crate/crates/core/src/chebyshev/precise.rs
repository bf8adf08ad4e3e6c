//! Extended-precision evaluation of `C_n*` and of its small-`nu` expansion.
//!
//! For `n >= 10^4` the truncation error of the four-term expansion
//! (`~ nu^9`) is far below `f64` resolution, so comparing the two requires
//! more working precision than `f64` offers.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::theorem2_coefficients;

/// Working precision in bits.
pub const PRECISION: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

struct Ctx {
    p: usize,
    cc: Consts,
}

impl Ctx {
    fn new(p: usize) -> Self {
        Ctx {
            p,
            cc: Consts::new().expect("constant cache"),
        }
    }

    fn int(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.p)
    }

    fn ln2(&mut self) -> BigFloat {
        self.cc.ln_2(self.p, RM)
    }

    fn rational(&mut self, q: &BigRational) -> BigFloat {
        let num = BigFloat::parse(&q.numer().to_string(), Radix::Dec, self.p, RM, &mut self.cc);
        let den = BigFloat::parse(&q.denom().to_string(), Radix::Dec, self.p, RM, &mut self.cc);
        num.div(&den, self.p, RM)
    }
}

fn to_f64(x: &BigFloat, cc: &mut Consts) -> f64 {
    x.format(Radix::Dec, RM, cc)
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .unwrap_or(f64::NAN)
}

/// `log C_n* = log T_n(2^(1/n)) / n`, through `acosh` exactly as in the `f64`
/// path but at [`PRECISION`] bits.
fn ln_cstar(ctx: &mut Ctx, n: u64) -> BigFloat {
    let p = ctx.p;
    let nf = ctx.int(n);
    let one = ctx.int(1);
    let two = ctx.int(2);
    let ln2 = ctx.ln2();
    let x = ln2.div(&nf, p, RM).exp(p, RM, &mut ctx.cc);
    let u = x.sub(&one, p, RM);
    let root = u.mul(&two.add(&u, p, RM), p, RM).sqrt(p, RM);
    let a = one.add(&u, p, RM).add(&root, p, RM).ln(p, RM, &mut ctx.cc);
    let na = nf.mul(&a, p, RM);
    let tail = na
        .mul(&two, p, RM)
        .neg()
        .exp(p, RM, &mut ctx.cc)
        .add(&one, p, RM)
        .ln(p, RM, &mut ctx.cc);
    na.sub(&ln2, p, RM).add(&tail, p, RM).div(&nf, p, RM)
}

fn expansion(ctx: &mut Ctx, n: u64, terms: usize) -> BigFloat {
    let p = ctx.p;
    let one = ctx.int(1);
    if terms == 0 {
        return one;
    }
    let ln2 = ctx.ln2();
    let nu2 = ln2.mul(&ctx.int(2), p, RM).div(&ctx.int(n), p, RM);
    let nu = nu2.sqrt(p, RM);
    let h = theorem2_coefficients(terms - 1);
    let mut acc = BigFloat::from_u64(0, p);
    for c in h.coeffs().iter().rev() {
        let c = ctx.rational(c);
        acc = acc.mul(&nu2, p, RM).add(&c, p, RM);
    }
    one.add(&nu.mul(&acc, p, RM), p, RM)
}

/// `C_n*` and the `terms`-term expansion, both at [`PRECISION`] bits, and
/// their difference rounded to `f64` only at the end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionGap {
    pub n: u64,
    pub terms: usize,
    pub nu: f64,
    pub cstar: f64,
    pub expansion: f64,
    /// `C_n* - expansion`.
    pub difference: f64,
    /// `2 nu^(2 terms + 1)`.
    pub tolerance: f64,
}

impl ExpansionGap {
    pub fn within_tolerance(&self) -> bool {
        self.difference.abs() <= self.tolerance
    }
}

pub fn expansion_gap(n: u64, terms: usize) -> ExpansionGap {
    assert!(n >= 1, "expansion_gap needs n >= 1");
    let mut ctx = Ctx::new(PRECISION);
    let p = ctx.p;
    let c = ln_cstar(&mut ctx, n).exp(p, RM, &mut ctx.cc);
    let e = expansion(&mut ctx, n, terms);
    let diff = c.sub(&e, p, RM);
    let nu = super::nu(n);
    ExpansionGap {
        n,
        terms,
        nu,
        cstar: to_f64(&c, &mut ctx.cc),
        expansion: to_f64(&e, &mut ctx.cc),
        difference: to_f64(&diff, &mut ctx.cc),
        tolerance: super::asymptotic_tolerance(nu, terms),
    }
}

/// `log C_n*` at [`PRECISION`] bits, rounded to `f64`.
pub fn ln_cstar_f64(n: u64) -> f64 {
    let mut ctx = Ctx::new(PRECISION);
    let v = ln_cstar(&mut ctx, n);
    to_f64(&v, &mut ctx.cc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::{asymptotic_cstar, cstar};

    #[test]
    fn agrees_with_f64_path() {
        for n in [1u64, 2, 3, 4, 10, 100, 12345, 1_000_000] {
            let hi = ln_cstar_f64(n);
            let lo = cstar(n).log_value;
            assert!(
                (hi - lo).abs() <= 1e-15 * hi.abs().max(1e-300) + 1e-18,
                "n={n}: {hi} vs {lo}"
            );
        }
        assert!((ln_cstar_f64(2) - 0.5 * 3f64.ln()).abs() < 1e-16);
    }

    #[test]
    fn expansion_matches_f64_partial_sums() {
        for n in [100u64, 10_000] {
            let g = expansion_gap(n, 4);
            assert!((g.expansion - asymptotic_cstar(n, 4).value).abs() < 1e-15);
        }
    }

    #[test]
    fn leading_error_is_next_coefficient() {
        // C_n* - (4-term sum) ~ (79/92160) nu^9 for small nu
        for n in [10_000u64, 1_000_000] {
            let g = expansion_gap(n, 4);
            let ratio = g.difference / g.nu.powi(9);
            assert!(
                (ratio - 79.0 / 92160.0).abs() < 1e-3 * 79.0 / 92160.0,
                "n={n}: {ratio}"
            );
            assert!(g.within_tolerance());
        }
    }
}
