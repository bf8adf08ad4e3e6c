//! Exact integer and rational algebra: polynomials, truncated series,
//! Graeffe steps and Hankel determinants. No floating point is involved
//! except in the reported growth statistics of [`HankelReport`].

pub mod hankel;
pub mod poly;
pub mod series;

use num_traits::{One, Zero};

pub use hankel::{hankel_determinants, HankelEntry, HankelReport};
pub use poly::IntPolynomial;
pub use series::{theorem2_coefficients, IntSeries, RatSeries};

use crate::error::{Error, Result};

/// The two Graeffe images `G2`, `G4` of `p` (roots squared and raised to the
/// fourth power), and their product scaled to constant term `+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraeffeProduct {
    pub squares: IntPolynomial,
    pub fourth_powers: IntPolynomial,
    pub product: IntPolynomial,
}

pub fn graeffe_product(p: &IntPolynomial) -> Result<GraeffeProduct> {
    if !p.is_monic() {
        return Err(Error::NonMonic);
    }
    if p.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let squares = p.graeffe()?;
    let fourth_powers = squares.graeffe()?;
    let mut product = squares.mul(&fourth_powers);
    // The constant term is (prod alpha_j)^6 for the raw product; flip the sign
    // if it ever comes out as -1 and refuse anything that is not a unit.
    let c0 = product.constant_term();
    if (-&c0).is_one() {
        product = product.neg();
    } else if !c0.is_one() {
        return Err(Error::NonUnitConstant {
            expected: 1,
            found: c0.to_string(),
        });
    }
    Ok(GraeffeProduct {
        squares,
        fourth_powers,
        product,
    })
}

/// Truncated series of `sqrt(G2(x) G4(x))` for the Graeffe images of `p`,
/// with coefficients `a_0, ..., a_order`.
///
/// The square root is required to have integer coefficients.
pub fn dimitrov_series(p: &IntPolynomial, order: usize) -> Result<IntSeries> {
    let gp = graeffe_product(p)?;
    IntSeries::from_polynomial(&gp.product, order).sqrt()
}
